#pragma once

#include <string>
#include <vector>

#include "taco/frame.hpp"
#include "taco/lossless.hpp"
#include "taco/lossy.hpp"

namespace taco {

inline constexpr const char* kCodecStore = "store";
inline constexpr const char* kCodecLosslessLite = "taco-ll-lite";
inline constexpr const char* kCodecLossyLite = "taco-l-lite";
inline constexpr const char* kQualityTokenLossless = "lossless";

// Identity codec: raw samples in a container. The baseline that pins the
// bits/Byte definition (8 plus measurable header overhead).
std::vector<uint8_t> encode_store(const TactileFrame& frame);
TactileFrame decode_store(const std::vector<uint8_t>& bytes);

// Dispatches on the container's codec id.
TactileFrame decode_any(const std::vector<uint8_t>& bytes);

// Uniform in-memory view over the built-in codecs, used by the bench runner
// and the classification harness. quality is a token: "lossless" for the
// lossless codecs, "0".."3" (lambda index) for the lossy one.
struct BuiltinCodec {
  std::string id;
  bool lossless = true;
  std::vector<std::string> qualities;

  std::vector<uint8_t> encode(const TactileFrame& frame, const std::string& quality) const;
  TactileFrame decode(const std::vector<uint8_t>& bytes) const;

  static bool is_builtin(const std::string& id);
  static BuiltinCodec get(const std::string& id);  // throws kUnknownCodec
};

}  // namespace taco
