#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "taco/frame.hpp"

namespace taco {

// One force-sensor sample: N taxels, each a 3-axis force vector in Newtons.
struct ForceRecord {
  double timestamp = 0.0;  // seconds, strictly increasing within a sequence
  std::vector<std::array<double, 3>> forces;
};

using ForceSequence = std::vector<ForceRecord>;

// Stacks T records of N taxels into an N-wide, T-tall force-stacked frame:
// pixel (row t, col n) = per-axis quantized (fx, fy, fz) -> (R, G, B).
TactileFrame force_to_frame(const ForceSequence& records, const ForceImageMapping& mapping);

// Inverse mapping. Timestamps are synthesized as the row index (the frame
// does not preserve them); forces land within scale/2 of the originals.
ForceSequence frame_to_force(const TactileFrame& frame, const ForceImageMapping& mapping);

// Force log CSV: header "t,fx_0,...,fx_{N-1},fy_0,...,fy_{N-1},fz_0,...,fz_{N-1}".
ForceSequence load_force_csv(const std::filesystem::path& path);
void save_force_csv(const ForceSequence& records, const std::filesystem::path& path);

// Mapping sidecar JSON: { "scale": [sx,sy,sz], "offset": [ox,oy,oz] }.
ForceImageMapping load_mapping(const std::filesystem::path& path);
void save_mapping(const ForceImageMapping& mapping, const std::filesystem::path& path);

}  // namespace taco
