#pragma once

#include <string>
#include <vector>

#include "acrnn/skeleton.hpp"

namespace acrnn {

// Parsed BVH file. Offsets and motion values stay in file units; unit
// normalization happens at ingest (see bvh_to_clip / import_scale).
struct BvhDocument {
  Skeleton skeleton;
  std::vector<bool> is_end_site;                       // per joint
  std::vector<std::vector<std::string>> channel_layout;  // per joint, in file order
  double frame_time_s = 0.0;
  std::vector<std::vector<double>> motion_rows;

  std::size_t total_channels() const;
};

// Grammar: HIERARCHY block (ROOT/JOINT/End Site with OFFSET and CHANNELS),
// then MOTION with "Frames:" and "Frame Time:". Throws ParseError with the
// offending line number; never crashes on arbitrary bytes.
BvhDocument parse_bvh(const std::string& text);

// Forward kinematics: channels applied in declared order (intrinsic
// rotations, degrees), offsets translated, positions scaled by
// scale_to_meters. fps = 1 / frame_time_s.
MotionClip bvh_to_clip(const BvhDocument& doc, double scale_to_meters = 1.0);

// Scale factor that makes the document's neutral-pose height equal
// target_height_m (default: the 1.54 m normalization anchor).
double import_scale(const BvhDocument& doc, double target_height_m = 1.54);

// Position-encoded export: every joint carries three position channels, so
// synthesized absolute joint positions survive exactly. Parses back via
// parse_bvh; writing the re-parsed document reproduces the bytes.
std::string write_bvh(const MotionClip& clip);
std::string write_bvh(const BvhDocument& doc);

void write_bvh_file(const MotionClip& clip, const std::string& path);
void write_bvh_file(const BvhDocument& doc, const std::string& path);

BvhDocument parse_bvh_file(const std::string& path);

}  // namespace acrnn
