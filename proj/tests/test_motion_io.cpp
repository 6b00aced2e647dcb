#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acrnn/bvh.hpp"
#include "acrnn/csv.hpp"
#include "acrnn/errors.hpp"
#include "acrnn/rng.hpp"
#include "acrnn/synthetic.hpp"

using namespace acrnn;

namespace {

// Hand-written fixture: root with 6 channels, one child with 3, three frames
// of 9 values each.
const char* kTwoJointFixture = R"(HIERARCHY
ROOT hip
{
  OFFSET 0 1 0
  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
  JOINT chest
  {
    OFFSET 0 0.5 0
    CHANNELS 3 Zrotation Xrotation Yrotation
    End Site
    {
      OFFSET 0 0.25 0
    }
  }
}
MOTION
Frames: 3
Frame Time: 0.0333333
0 0 0 0 0 0 0 0 0
1 2 3 0 0 0 0 0 0
0 0 0 90 0 0 0 0 0
)";

}  // namespace

TEST_CASE("parse_bvh reads the two-joint fixture") {
  const BvhDocument doc = parse_bvh(kTwoJointFixture);
  // hip, chest, chest_end: end sites carry positions too.
  REQUIRE(doc.skeleton.joint_count() == 3);
  CHECK(doc.skeleton.joints[0].name == "hip");
  CHECK(doc.skeleton.joints[1].name == "chest");
  CHECK(doc.is_end_site[2]);
  CHECK(doc.channel_layout[0].size() == 6);
  CHECK(doc.channel_layout[1].size() == 3);
  CHECK(doc.channel_layout[2].empty());
  CHECK(doc.total_channels() == 9);
  REQUIRE(doc.motion_rows.size() == 3);
  for (const auto& row : doc.motion_rows) CHECK(row.size() == 9);
  CHECK(doc.frame_time_s == doctest::Approx(0.0333333));
}

TEST_CASE("bvh_to_clip forward kinematics") {
  const BvhDocument doc = parse_bvh(kTwoJointFixture);
  const MotionClip clip = bvh_to_clip(doc);
  REQUIRE(clip.frame_count() == 3);
  REQUIRE(clip.joint_count() == 3);

  // Frame 0 is the neutral pose: offsets accumulate down the chain.
  CHECK((clip.frames[0][0] - Vec3{0, 1, 0}).norm() < 1e-12);
  CHECK((clip.frames[0][1] - Vec3{0, 1.5, 0}).norm() < 1e-12);
  CHECK((clip.frames[0][2] - Vec3{0, 1.75, 0}).norm() < 1e-12);

  // Frame 1 rigidly translates everything by the root position channels.
  CHECK((clip.frames[1][0] - Vec3{1, 3, 3}).norm() < 1e-12);
  CHECK((clip.frames[1][1] - Vec3{1, 3.5, 3}).norm() < 1e-12);

  // Frame 2: 90 degree Z rotation at the root turns +y offsets into -x...
  // Rz(90) maps (0,0.5,0) to (-0.5,0,0).
  CHECK((clip.frames[2][1] - Vec3{-0.5, 1, 0}).norm() < 1e-9);
  CHECK((clip.frames[2][2] - Vec3{-0.75, 1, 0}).norm() < 1e-9);
}

TEST_CASE("bvh_to_clip: 90 degree Zrotation moves a +x child to +y") {
  const char* text = R"(HIERARCHY
ROOT base
{
  OFFSET 0 0 0
  CHANNELS 1 Zrotation
  JOINT tip
  {
    OFFSET 1 0 0
    CHANNELS 0
  }
}
MOTION
Frames: 1
Frame Time: 0.016
90
)";
  const MotionClip clip = bvh_to_clip(parse_bvh(text));
  CHECK((clip.frames[0][1] - Vec3{0, 1, 0}).norm() < 1e-12);
}

TEST_CASE("parse errors carry line numbers") {
  SUBCASE("missing MOTION") {
    const std::string text = "HIERARCHY\nROOT a\n{\nOFFSET 0 0 0\nCHANNELS 0\n}\n";
    CHECK_THROWS_AS(parse_bvh(text), ParseError);
  }
  SUBCASE("truncated motion section") {
    std::string text = kTwoJointFixture;
    text = text.substr(0, text.size() - 20);  // cut into the last frame
    try {
      parse_bvh(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number >= 18);  // inside the MOTION block
      CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
  }
  SUBCASE("unknown channel") {
    const std::string text =
        "HIERARCHY\nROOT a\n{\nOFFSET 0 0 0\nCHANNELS 1 Wrotation\n}\nMOTION\nFrames: 0\nFrame Time: 0.1\n";
    try {
      parse_bvh(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number == 5);
    }
  }
  SUBCASE("unbalanced braces") {
    const std::string text = "HIERARCHY\nROOT a\n{\nOFFSET 0 0 0\nCHANNELS 0\nMOTION\n";
    CHECK_THROWS_AS(parse_bvh(text), ParseError);
  }
  SUBCASE("trailing values") {
    std::string text = kTwoJointFixture;
    text += "42\n";
    CHECK_THROWS_AS(parse_bvh(text), ParseError);
  }
}

TEST_CASE("write -> parse -> write is byte-stable") {
  const BvhDocument doc = parse_bvh(kTwoJointFixture);
  const std::string first = write_bvh(doc);
  const std::string second = write_bvh(parse_bvh(first));
  CHECK(first == second);

  Rng rng(3);
  const MotionClip clip = generate_synthetic_dance(default_synthetic_skeleton(), 20, 60.0, rng);
  const std::string a = write_bvh(clip);
  const std::string b = write_bvh(parse_bvh(a));
  CHECK(a == b);
}

TEST_CASE("position-encoded export reproduces absolute positions") {
  Rng rng(4);
  const MotionClip clip = generate_synthetic_dance(default_synthetic_skeleton(), 25, 60.0, rng);
  const MotionClip back = bvh_to_clip(parse_bvh(write_bvh(clip)));
  REQUIRE(back.frame_count() == clip.frame_count());
  double worst = 0.0;
  for (std::size_t t = 0; t < clip.frame_count(); ++t)
    for (std::size_t j = 0; j < clip.joint_count(); ++j)
      worst = std::max(worst, (back.frames[t][j] - clip.frames[t][j]).norm());
  CHECK(worst < 1e-12);
  CHECK(back.fps == doctest::Approx(clip.fps).epsilon(1e-6));
}

TEST_CASE("frame time is written with 7 significant digits") {
  Rng rng(5);
  MotionClip clip = generate_synthetic_dance(default_synthetic_skeleton(), 3, 60.0, rng);
  const std::string text = write_bvh(clip);
  CHECK(text.find("Frame Time: 0.01666667\n") != std::string::npos);
}

TEST_CASE("write_bvh refuses an empty clip") {
  MotionClip clip;
  clip.skeleton = default_synthetic_skeleton();
  clip.fps = 60.0;
  CHECK_THROWS_AS(write_bvh(clip), RefusedEmpty);
}

TEST_CASE("import_scale normalizes neutral height to 1.54 m") {
  // Fixture spans 0.75 units from hip (y=1) to end site (y=1.75).
  const BvhDocument doc = parse_bvh(kTwoJointFixture);
  const double scale = import_scale(doc);
  CHECK(scale == doctest::Approx(1.54 / 0.75));
  const MotionClip clip = bvh_to_clip(doc, scale);
  CHECK(clip.skeleton->neutral_height() == doctest::Approx(1.54));
}

TEST_CASE("parser survives fuzzed input without crashing") {
  Rng rng(0xf0220u);
  const std::string base = kTwoJointFixture;
  std::size_t parsed_ok = 0;
  for (int round = 0; round < 3000; ++round) {
    std::string text;
    if (round % 3 == 0) {
      // Arbitrary bytes.
      text.resize(rng.below(300));
      for (char& c : text) c = static_cast<char>(rng.below(256));
    } else {
      // Mutated fixture: flip, delete or duplicate a few bytes.
      text = base;
      for (int m = 0; m < 8 && !text.empty(); ++m) {
        const std::size_t pos = rng.below(text.size());
        switch (rng.below(3)) {
          case 0: text[pos] = static_cast<char>(rng.below(256)); break;
          case 1: text.erase(pos, 1); break;
          default: text.insert(pos, 1, text[pos]); break;
        }
      }
    }
    try {
      (void)parse_bvh(text);
      ++parsed_ok;
    } catch (const ParseError&) {
      // expected for most mutations
    }
  }
  CHECK(parsed_ok < 3000);  // sanity: the loop did exercise failures
}

TEST_CASE("csv round trips losslessly") {
  CsvTable table;
  table.header = {"a", "b", "c"};
  table.rows = {{0.1, -2.5e-17, 3.0}, {1.0 / 3.0, 6.02e23, -0.0}};
  const std::string text = write_csv(table);
  CHECK(read_csv(text) == table);

  SUBCASE("empty report is a header-only file") {
    CsvTable empty;
    empty.header = {"x", "y"};
    CHECK(write_csv(empty) == "x,y\n");
    CHECK(read_csv("x,y\n") == empty);
  }
  SUBCASE("2x3 fixture compared cell-wise") {
    CsvTable t;
    t.header = {"h1", "h2", "h3"};
    t.rows = {{1.5, 2.25, -3.125}, {4.0, 0.0078125, 6.5}};
    const CsvTable back = read_csv(write_csv(t));
    REQUIRE(back.rows.size() == 2);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 3; ++c) CHECK(back.rows[r][c] == t.rows[r][c]);
  }
  SUBCASE("malformed csv raises CsvError") {
    CHECK_THROWS_AS(read_csv("a,b\n1,2,3\n"), CsvError);
    CHECK_THROWS_AS(read_csv("a,b\n1,oops\n"), CsvError);
    CHECK_THROWS_AS(read_csv(""), CsvError);
  }
}
