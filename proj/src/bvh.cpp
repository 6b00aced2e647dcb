#include "acrnn/bvh.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "acrnn/errors.hpp"
#include "acrnn/text.hpp"

namespace acrnn {

namespace {

constexpr std::size_t kMaxDepth = 512;

struct Token {
  std::string_view text;
  std::size_t line;
};

// Whitespace-separated tokens with line tracking.
class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  bool eof() {
    skip_space();
    return pos_ >= text_.size();
  }

  Token peek() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(line_, "unexpected end of file");
    std::size_t end = pos_;
    while (end < text_.size() && !is_space(text_[end])) ++end;
    return {std::string_view(text_).substr(pos_, end - pos_), line_};
  }

  Token next() {
    Token t = peek();
    pos_ += t.text.size();
    return t;
  }

  void expect(std::string_view word) {
    Token t = next();
    if (t.text != word)
      throw ParseError(t.line, "expected '" + std::string(word) + "', got '" +
                                   std::string(t.text) + "'");
  }

  double number() {
    Token t = next();
    auto v = parse_double(t.text);
    if (!v) throw ParseError(t.line, "expected a number, got '" + std::string(t.text) + "'");
    return *v;
  }

  std::size_t current_line() const { return line_; }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

const std::array<std::string_view, 6> kChannelNames = {"Xposition", "Yposition", "Zposition",
                                                       "Xrotation", "Yrotation", "Zrotation"};

bool known_channel(std::string_view name) {
  for (auto c : kChannelNames)
    if (c == name) return true;
  return false;
}

struct Parser {
  Lexer lex;
  BvhDocument doc;

  explicit Parser(const std::string& text) : lex(text) {}

  void joint_body(std::size_t joint_index, std::size_t depth) {
    if (depth > kMaxDepth) throw ParseError(lex.current_line(), "hierarchy nested too deeply");
    lex.expect("{");
    lex.expect("OFFSET");
    Vec3 off;
    off.x = lex.number();
    off.y = lex.number();
    off.z = lex.number();
    doc.skeleton.joints[joint_index].offset = off;

    Token t = lex.peek();
    if (t.text == "CHANNELS") {
      lex.next();
      Token count_tok = lex.next();
      auto count = parse_int(count_tok.text);
      if (!count || *count < 0)
        throw ParseError(count_tok.line, "bad channel count '" + std::string(count_tok.text) + "'");
      for (long long i = 0; i < *count; ++i) {
        Token name = lex.next();
        if (!known_channel(name.text))
          throw ParseError(name.line, "unknown channel '" + std::string(name.text) + "'");
        doc.channel_layout[joint_index].emplace_back(name.text);
      }
    }

    while (true) {
      t = lex.peek();
      if (t.text == "}") {
        lex.next();
        return;
      }
      if (t.text == "JOINT") {
        lex.next();
        Token name = lex.next();
        add_joint(std::string(name.text), joint_index, false);
        joint_body(doc.skeleton.joints.size() - 1, depth + 1);
      } else if (t.text == "End") {
        lex.next();
        lex.expect("Site");
        add_joint(doc.skeleton.joints[joint_index].name + "_end", joint_index, true);
        joint_body(doc.skeleton.joints.size() - 1, depth + 1);
      } else {
        throw ParseError(t.line, "expected JOINT, End Site or '}', got '" + std::string(t.text) + "'");
      }
    }
  }

  void add_joint(std::string name, std::optional<std::size_t> parent, bool end_site) {
    doc.skeleton.joints.push_back({std::move(name), parent, {}});
    doc.channel_layout.emplace_back();
    doc.is_end_site.push_back(end_site);
  }

  BvhDocument run() {
    lex.expect("HIERARCHY");
    lex.expect("ROOT");
    Token root_name = lex.next();
    add_joint(std::string(root_name.text), std::nullopt, false);
    doc.skeleton.root_index = 0;
    joint_body(0, 0);

    Token t = lex.next();
    if (t.text == "ROOT") throw ParseError(t.line, "multiple ROOT joints are not supported");
    if (t.text != "MOTION") throw ParseError(t.line, "expected MOTION, got '" + std::string(t.text) + "'");

    lex.expect("Frames:");
    Token frames_tok = lex.next();
    auto frame_count = parse_int(frames_tok.text);
    if (!frame_count || *frame_count < 0)
      throw ParseError(frames_tok.line, "bad frame count '" + std::string(frames_tok.text) + "'");
    lex.expect("Frame");
    lex.expect("Time:");
    doc.frame_time_s = lex.number();
    if (!(doc.frame_time_s > 0.0))
      throw ParseError(lex.current_line(), "Frame Time must be positive");

    const std::size_t channels = doc.total_channels();
    doc.motion_rows.reserve(static_cast<std::size_t>(*frame_count));
    for (long long f = 0; f < *frame_count; ++f) {
      std::vector<double> row;
      row.reserve(channels);
      for (std::size_t c = 0; c < channels; ++c) {
        if (lex.eof())
          throw ParseError(lex.current_line(), "motion data ends inside frame " + std::to_string(f));
        row.push_back(lex.number());
      }
      doc.motion_rows.push_back(std::move(row));
    }
    if (!lex.eof()) {
      Token extra = lex.peek();
      throw ParseError(extra.line, "trailing data after the declared frames");
    }
    doc.skeleton.height_m = doc.skeleton.neutral_height();
    return std::move(doc);
  }
};

// Column-major free 3x3 rotation acting on column vectors.
struct Xform {
  // row-major rotation
  std::array<double, 9> r = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  Vec3 t;

  Vec3 apply(const Vec3& v) const {
    return {r[0] * v.x + r[1] * v.y + r[2] * v.z + t.x,
            r[3] * v.x + r[4] * v.y + r[5] * v.z + t.y,
            r[6] * v.x + r[7] * v.y + r[8] * v.z + t.z};
  }

  Xform operator*(const Xform& o) const {
    Xform out;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        out.r[i * 3 + j] =
            r[i * 3] * o.r[j] + r[i * 3 + 1] * o.r[3 + j] + r[i * 3 + 2] * o.r[6 + j];
    out.t = apply(o.t);
    return out;
  }

  static Xform translation(const Vec3& v) {
    Xform x;
    x.t = v;
    return x;
  }

  static Xform rotation(char axis, double degrees) {
    const double a = degrees * (3.14159265358979323846 / 180.0);
    const double c = std::cos(a), s = std::sin(a);
    Xform x;
    switch (axis) {
      case 'X':
        x.r = {1, 0, 0, 0, c, -s, 0, s, c};
        break;
      case 'Y':
        x.r = {c, 0, s, 0, 1, 0, -s, 0, c};
        break;
      default:
        x.r = {c, -s, 0, s, c, 0, 0, 0, 1};
        break;
    }
    return x;
  }
};

void append_number(std::string& out, double v) { out += format_double(v); }

void write_joint(std::string& out, const BvhDocument& doc,
                 const std::vector<std::vector<std::size_t>>& children, std::size_t j,
                 std::size_t depth) {
  const std::string indent(depth * 2, ' ');
  const Joint& joint = doc.skeleton.joints[j];
  if (j == doc.skeleton.root_index)
    out += indent + "ROOT " + joint.name + "\n";
  else if (doc.is_end_site[j])
    out += indent + "End Site\n";
  else
    out += indent + "JOINT " + joint.name + "\n";
  out += indent + "{\n";
  out += indent + "  OFFSET ";
  append_number(out, joint.offset.x);
  out += ' ';
  append_number(out, joint.offset.y);
  out += ' ';
  append_number(out, joint.offset.z);
  out += '\n';
  if (!doc.channel_layout[j].empty()) {
    out += indent + "  CHANNELS " + std::to_string(doc.channel_layout[j].size());
    for (const std::string& c : doc.channel_layout[j]) out += " " + c;
    out += '\n';
  }
  for (std::size_t child : children[j]) write_joint(out, doc, children, child, depth + 1);
  out += indent + "}\n";
}

}  // namespace

std::size_t BvhDocument::total_channels() const {
  std::size_t n = 0;
  for (const auto& c : channel_layout) n += c.size();
  return n;
}

BvhDocument parse_bvh(const std::string& text) { return Parser(text).run(); }

MotionClip bvh_to_clip(const BvhDocument& doc, double scale_to_meters) {
  const std::size_t joints = doc.skeleton.joint_count();
  for (const auto& layout : doc.channel_layout)
    for (const std::string& c : layout)
      if (!known_channel(c)) throw UnsupportedChannel("bvh_to_clip: channel '" + c + "'");

  auto skel = std::make_shared<Skeleton>(doc.skeleton);
  for (Joint& j : skel->joints) j.offset = j.offset * scale_to_meters;
  skel->height_m = skel->neutral_height();

  MotionClip clip;
  clip.skeleton = skel;
  clip.fps = 1.0 / doc.frame_time_s;
  clip.frames.reserve(doc.motion_rows.size());

  const std::size_t channels = doc.total_channels();
  std::vector<Xform> world(joints);
  for (const std::vector<double>& row : doc.motion_rows) {
    if (row.size() != channels)
      throw ContractError("bvh_to_clip: row has " + std::to_string(row.size()) +
                          " values, layout needs " + std::to_string(channels));
    Pose pose(joints);
    std::size_t cursor = 0;
    for (std::size_t j = 0; j < joints; ++j) {
      Xform local = Xform::translation(doc.skeleton.joints[j].offset * scale_to_meters);
      for (const std::string& c : doc.channel_layout[j]) {
        const double v = row[cursor++];
        if (c[1] == 'p') {  // ?position
          Vec3 t;
          if (c[0] == 'X')
            t.x = v * scale_to_meters;
          else if (c[0] == 'Y')
            t.y = v * scale_to_meters;
          else
            t.z = v * scale_to_meters;
          local = local * Xform::translation(t);
        } else {
          local = local * Xform::rotation(c[0], v);
        }
      }
      const Joint& joint = doc.skeleton.joints[j];
      world[j] = joint.parent ? world[*joint.parent] * local : local;
      pose[j] = world[j].t;
    }
    clip.frames.push_back(std::move(pose));
  }
  return clip;
}

double import_scale(const BvhDocument& doc, double target_height_m) {
  const double h = doc.skeleton.neutral_height();
  if (!(h > 0.0))
    throw ConfigError("import: neutral-pose height is not positive; pass an explicit scale");
  return target_height_m / h;
}

std::string write_bvh(const BvhDocument& doc) {
  const std::size_t joints = doc.skeleton.joint_count();
  if (doc.motion_rows.empty()) throw RefusedEmpty("write_bvh: no motion rows");
  std::vector<std::vector<std::size_t>> children(joints);
  for (std::size_t j = 0; j < joints; ++j)
    if (doc.skeleton.joints[j].parent) children[*doc.skeleton.joints[j].parent].push_back(j);

  std::string out = "HIERARCHY\n";
  write_joint(out, doc, children, doc.skeleton.root_index, 0);
  out += "MOTION\n";
  out += "Frames: " + std::to_string(doc.motion_rows.size()) + "\n";
  char ft[40];
  std::snprintf(ft, sizeof(ft), "%.7g", doc.frame_time_s);
  out += "Frame Time: " + std::string(ft) + "\n";
  for (const auto& row : doc.motion_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ' ';
      append_number(out, row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string write_bvh(const MotionClip& clip) {
  if (clip.frames.empty()) throw RefusedEmpty("write_bvh: empty clip");
  const Skeleton& skel = *clip.skeleton;
  const std::size_t joints = skel.joint_count();

  BvhDocument doc;
  doc.skeleton = skel;
  doc.is_end_site.assign(joints, false);
  doc.channel_layout.assign(joints, {"Xposition", "Yposition", "Zposition"});
  doc.frame_time_s = 1.0 / clip.fps;
  doc.motion_rows.reserve(clip.frame_count());
  for (const Pose& pose : clip.frames) {
    std::vector<double> row;
    row.reserve(3 * joints);
    for (std::size_t j = 0; j < joints; ++j) {
      const Joint& joint = skel.joints[j];
      // FK gives parent_world + OFFSET + channels, so store the remainder.
      const Vec3 base = joint.parent ? pose[*joint.parent] + joint.offset : joint.offset;
      const Vec3 v = pose[j] - base;
      row.push_back(v.x);
      row.push_back(v.y);
      row.push_back(v.z);
    }
    doc.motion_rows.push_back(std::move(row));
  }
  return write_bvh(doc);
}

void write_bvh_file(const MotionClip& clip, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << write_bvh(clip);
  if (!out) throw IoError("failed writing " + path);
}

void write_bvh_file(const BvhDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << write_bvh(doc);
  if (!out) throw IoError("failed writing " + path);
}

BvhDocument parse_bvh_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bvh(buf.str());
}

}  // namespace acrnn
