#include "acrnn/dataset.hpp"

#include <algorithm>
#include <filesystem>

#include "acrnn/bvh.hpp"
#include "acrnn/errors.hpp"

namespace acrnn {

namespace fs = std::filesystem;

std::vector<std::string> list_bvh_files(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bvh")
      files.push_back(entry.path().string());
  }
  if (ec) throw IoError("cannot list " + dir + ": " + ec.message());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<MotionClip> load_dataset(const std::string& dir) {
  const auto files = list_bvh_files(dir);
  if (files.empty()) throw EmptyDataset("no .bvh files in " + dir);
  std::vector<MotionClip> clips;
  clips.reserve(files.size());
  for (const std::string& file : files) {
    try {
      MotionClip clip = bvh_to_clip(parse_bvh_file(file));
      clip.id = fs::path(file).filename().string();
      clips.push_back(std::move(clip));
    } catch (const ParseError& e) {
      throw ParseError(e.line_number, file + ": " + e.what());
    }
  }
  return clips;
}

}  // namespace acrnn
