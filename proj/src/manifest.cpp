#include "locus/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "locus/io.hpp"

namespace locus {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest " + path);

  Manifest m;
  m.base_dir = std::filesystem::path(path).parent_path().string();

  std::string line;
  if (!std::getline(in, line)) throw ManifestError("empty manifest " + path);
  if (split_csv(line) != std::vector<std::string>{"image", "ground_truth", "kind"})
    throw ManifestError("manifest header must be 'image,ground_truth,kind': " + path);

  std::set<std::string> seen;
  std::vector<std::string> problems;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3) {
      problems.push_back("line " + std::to_string(line_no) + ": expected 3 fields");
      continue;
    }
    if (fields[2] != "mask" && fields[2] != "points") {
      problems.push_back("line " + std::to_string(line_no) + ": kind must be mask or points");
      continue;
    }
    if (!seen.insert(fields[0]).second) {
      problems.push_back("line " + std::to_string(line_no) + ": duplicate image " + fields[0]);
      continue;
    }
    m.entries.push_back({fields[0], fields[1], fields[2]});
  }
  if (!problems.empty()) {
    std::string msg = "bad manifest " + path;
    for (const auto& p : problems) msg += "\n  " + p;
    throw ManifestError(msg);
  }
  if (m.entries.empty()) throw ManifestError("manifest has no entries: " + path);
  return m;
}

std::vector<DatasetImage> load_dataset(const Manifest& manifest) {
  std::vector<DatasetImage> out;
  std::vector<std::string> problems;
  for (const auto& entry : manifest.entries) {
    const auto resolve = [&](const std::string& p) {
      const std::filesystem::path fp(p);
      return fp.is_absolute() ? fp.string()
                              : (std::filesystem::path(manifest.base_dir) / fp).string();
    };
    try {
      DatasetImage img;
      img.id = entry.image_path;
      img.image = read_image(resolve(entry.image_path));
      img.truth =
          load_ground_truth(resolve(entry.ground_truth_path), img.image.width(), img.image.height());
      out.push_back(std::move(img));
    } catch (const Error& e) {
      problems.push_back(entry.image_path + ": " + e.what());
    }
  }
  if (!problems.empty()) {
    std::string msg = "failed to load dataset entries";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ManifestError(msg);
  }
  return out;
}

}  // namespace locus
