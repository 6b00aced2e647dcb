#pragma once

#include <string>
#include <vector>

#include "acrnn/skeleton.hpp"

namespace acrnn {

// Loads every *.bvh under dir (sorted by name, no recursion) at scale 1.
// Dataset directories are written by `dataset gen` / `dataset import` and are
// already in meters.
std::vector<MotionClip> load_dataset(const std::string& dir);

std::vector<std::string> list_bvh_files(const std::string& dir);

}  // namespace acrnn
