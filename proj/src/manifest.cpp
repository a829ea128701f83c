#include "taco/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace taco {

std::vector<std::string> DatasetManifest::trajectory_ids() const {
  std::vector<std::string> ids;
  ids.reserve(entries.size());
  for (const ManifestEntry& e : entries) ids.push_back(e.trajectory_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void DatasetManifest::validate() const {
  std::unordered_set<std::string> paths;
  std::unordered_map<std::string, Split> traj_split;
  for (const ManifestEntry& e : entries) {
    if (!paths.insert(e.path).second) {
      fail(Err::kUnsupportedFormat, "duplicate path in manifest: " + e.path);
    }
    auto [it, inserted] = traj_split.emplace(e.trajectory_id, e.split);
    if (!inserted && it->second != e.split) {
      fail(Err::kUnsupportedFormat, "trajectory " + e.trajectory_id + " straddles splits");
    }
  }
}

DatasetManifest split_dataset(const DatasetManifest& manifest, double train_fraction,
                              uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(Err::kNonPositiveInput, "train_fraction must be in (0,1)");
  }
  std::vector<std::string> ids = manifest.trajectory_ids();
  if (ids.size() < 2) fail(Err::kTooFewTrajectories, "need at least 2 trajectories to split");

  // Fisher-Yates over the sorted id list; nearest count with ties up.
  SplitMix64 rng(seed);
  for (size_t i = ids.size() - 1; i > 0; --i) {
    size_t j = size_t(rng.next_below(i + 1));
    std::swap(ids[i], ids[j]);
  }
  const size_t train_count = size_t(std::floor(train_fraction * double(ids.size()) + 0.5));

  std::unordered_map<std::string, Split> assignment;
  for (size_t i = 0; i < ids.size(); ++i) {
    assignment[ids[i]] = i < train_count ? Split::kTrain : Split::kTest;
  }

  DatasetManifest out = manifest;
  for (ManifestEntry& e : out.entries) e.split = assignment[e.trajectory_id];
  return out;
}

namespace {

const char* split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kTest: return "test";
    default: return "unassigned";
  }
}

Split split_from_name(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "test") return Split::kTest;
  if (s == "unassigned") return Split::kUnassigned;
  fail(Err::kUnsupportedFormat, "unknown split value: " + s);
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Err::kUnreadableFile, path.string() + ": cannot open");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(Err::kUnsupportedFormat, path.string() + ": " + e.what());
  }

  DatasetManifest m;
  try {
    m.name = doc.at("name").get<std::string>();
    const std::string kind = doc.at("sensor_kind").get<std::string>();
    if (kind == "visuo") {
      m.sensor_kind = SensorKind::kVisuoTactile;
    } else if (kind == "force") {
      m.sensor_kind = SensorKind::kForceStacked;
    } else {
      fail(Err::kUnsupportedFormat, path.string() + ": sensor_kind must be visuo|force");
    }
    for (const auto& item : doc.at("entries")) {
      ManifestEntry e;
      e.path = item.at("path").get<std::string>();
      e.label = item.value("label", "");
      e.trajectory_id = item.at("trajectory_id").get<std::string>();
      e.split = split_from_name(item.value("split", "unassigned"));
      m.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Err::kUnsupportedFormat, path.string() + ": " + e.what());
  }
  m.validate();
  return m;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["name"] = manifest.name;
  doc["sensor_kind"] = manifest.sensor_kind == SensorKind::kForceStacked ? "force" : "visuo";
  doc["entries"] = nlohmann::json::array();
  for (const ManifestEntry& e : manifest.entries) {
    doc["entries"].push_back({{"path", e.path},
                              {"label", e.label},
                              {"trajectory_id", e.trajectory_id},
                              {"split", split_name(e.split)}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": cannot open for writing");
  out << doc.dump(2) << "\n";
}

}  // namespace taco
