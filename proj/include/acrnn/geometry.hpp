#pragma once

#include <cmath>

namespace acrnn {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

  double norm() const { return std::sqrt(x * x + y * y + z * z); }

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

// Rotation about the vertical (y) axis, right-handed: for angle pi/2,
// (1,0,0) maps to (0,0,-1).
inline Vec3 rotate_y(const Vec3& v, double angle_rad) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  return {c * v.x + s * v.z, v.y, -s * v.x + c * v.z};
}

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

}  // namespace acrnn
