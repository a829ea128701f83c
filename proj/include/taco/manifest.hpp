#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "taco/frame.hpp"

namespace taco {

enum class Split : uint8_t { kUnassigned, kTrain, kTest };

struct ManifestEntry {
  std::string path;
  std::string label;
  std::string trajectory_id;
  Split split = Split::kUnassigned;
};

struct DatasetManifest {
  std::string name;
  SensorKind sensor_kind = SensorKind::kVisuoTactile;
  std::vector<ManifestEntry> entries;

  std::vector<std::string> trajectory_ids() const;  // sorted, unique
  void validate() const;                            // unique paths, split coherence
};

// Assigns Train/Test per trajectory (never per frame). The train count is
// round(train_fraction * #trajectories), ties rounded up; the shuffle is a
// pure function of (trajectory set, seed), not of entry order.
DatasetManifest split_dataset(const DatasetManifest& manifest, double train_fraction,
                              uint64_t seed);

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

}  // namespace taco
