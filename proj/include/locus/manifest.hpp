#pragma once

#include <string>
#include <vector>

#include "locus/eval.hpp"

namespace locus {

struct ManifestEntry {
  std::string image_path;
  std::string ground_truth_path;
  std::string kind;  // "mask" or "points"
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::string base_dir;
};

/// CSV with header "image,ground_truth,kind"; paths resolve against the
/// manifest's directory. Throws ManifestError with per-entry diagnostics.
Manifest load_manifest(const std::string& path);

/// Loads every entry's image and ground truth.
std::vector<DatasetImage> load_dataset(const Manifest& manifest);

}  // namespace locus
