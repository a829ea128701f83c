#include "taco/lossless.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "json.hpp"
#include "taco/kernels.hpp"
#include "taco/tokenizer.hpp"

namespace taco {

namespace {

// Residuals cluster around 0 mod 256; interleaving +/- as 0,-1,+1,-2,...
// keeps the frequency-table scans short.
struct ResidualMaps {
  std::array<uint8_t, 256> fold;    // residual -> token
  std::array<uint8_t, 256> unfold;  // token -> residual
};

ResidualMaps make_residual_maps() {
  ResidualMaps m{};
  for (int r = 0; r < 256; ++r) {
    const int s = r < 128 ? r : r - 256;
    const int u = s >= 0 ? 2 * s : -2 * s - 1;
    m.fold[r] = uint8_t(u);
    m.unfold[u] = uint8_t(r);
  }
  return m;
}

const ResidualMaps kResidual = make_residual_maps();

// Geometric |left - above| buckets: 0, 1, 2-3, 4-7, ...
std::array<uint8_t, 256> make_context_lut(uint32_t buckets) {
  std::array<uint8_t, 256> lut{};
  for (int g = 0; g < 256; ++g) {
    uint32_t b = g == 0 ? 0 : 1 + uint32_t(std::bit_width(uint32_t(g)) - 1);
    lut[g] = uint8_t(std::min(b, buckets - 1));
  }
  return lut;
}

const char* predictor_name(Predictor p) {
  switch (p) {
    case Predictor::kZero: return "zero";
    case Predictor::kLeft: return "left";
    default: return "medge";
  }
}

Predictor predictor_from_name(const std::string& name) {
  if (name == "zero") return Predictor::kZero;
  if (name == "left") return Predictor::kLeft;
  if (name == "medge") return Predictor::kMedianEdge;
  fail(Err::kCorruptHeader, "unknown predictor: " + name);
}

// Scalar residual pass for the non-default predictors; the median-edge path
// goes through the dispatched kernel.
void plain_residuals(const uint8_t* patch, Predictor pred, uint8_t* residuals, uint8_t* grads) {
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        const int idx = 3 * (r * 16 + c) + ch;
        const int left = c > 0 ? patch[idx - 3] : 0;
        const int above = r > 0 ? patch[idx - 48] : 0;
        const int p = pred == Predictor::kLeft ? left : 0;
        residuals[idx] = uint8_t(patch[idx] - p);
        grads[idx] = uint8_t(std::abs(left - above));
      }
    }
  }
}

nlohmann::json frame_metadata(const TactileFrame& frame, const LosslessConfig& cfg) {
  nlohmann::json meta;
  meta["ow"] = frame.width;
  meta["oh"] = frame.height;
  meta["sensor"] = frame.sensor_kind == SensorKind::kForceStacked ? "force" : "visuo";
  if (frame.mapping) {
    meta["map"] = {{"scale", frame.mapping->scale}, {"offset", frame.mapping->offset}};
  }
  meta["predictor"] = predictor_name(cfg.predictor);
  meta["ctx"] = cfg.context_buckets;
  return meta;
}

}  // namespace

std::vector<uint8_t> encode_lossless(const TactileFrame& frame, const LosslessConfig& cfg) {
  frame.validate();
  if (cfg.context_buckets < 1 || cfg.context_buckets > 256) {
    fail(Err::kNonPositiveInput, "context_buckets must be in [1,256]");
  }

  const TokenStream tokens = tokenize(frame);
  const auto ctx_lut = make_context_lut(cfg.context_buckets);
  const auto& kern = kernels::active_kernels();

  SymbolModel model(cfg.context_buckets, cfg.adaptation);
  RangeEncoder enc;
  std::array<uint8_t, kPatchSymbols> residuals;
  std::array<uint8_t, kPatchSymbols> grads;

  const size_t patches = tokens.symbols.size() / kPatchSymbols;
  for (size_t p = 0; p < patches; ++p) {
    const uint8_t* patch = tokens.symbols.data() + p * kPatchSymbols;
    if (cfg.predictor == Predictor::kMedianEdge) {
      kern.med_residuals(patch, residuals.data(), grads.data());
    } else {
      plain_residuals(patch, cfg.predictor, residuals.data(), grads.data());
    }
    for (size_t i = 0; i < kPatchSymbols; ++i) {
      model.encode(enc, ctx_lut[grads[i]], kResidual.fold[residuals[i]]);
    }
  }
  Bitstream bits = enc.finish();

  nlohmann::json meta = frame_metadata(frame, cfg);
  meta["crc"] = crc32(bits.bytes);

  Container c;
  c.codec_id = kCodecIdLosslessLite;
  c.flags = frame.sensor_kind == SensorKind::kForceStacked ? kFlagForceStacked : 0;
  c.width = uint16_t(tokens.geometry.padded_w());
  c.height = uint16_t(tokens.geometry.padded_h());
  c.quality = kQualityLossless;
  c.metadata = meta.dump();
  c.payload = std::move(bits.bytes);
  return write_container(c);
}

LosslessSize encode_lossless_size(const TactileFrame& frame, const LosslessConfig& cfg) {
  const std::vector<uint8_t> bytes = encode_lossless(frame, cfg);
  const Container c = read_container(bytes);
  return {bytes.size(), c.payload.size()};
}

TactileFrame decode_lossless(const std::vector<uint8_t>& bytes) {
  const Container c = read_container(bytes);
  if (c.codec_id != kCodecIdLosslessLite) fail(Err::kCorruptHeader, "not a lossless-lite stream");

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(c.metadata);
  } catch (const nlohmann::json::exception& e) {
    fail(Err::kCorruptHeader, std::string("bad container metadata: ") + e.what());
  }
  if (meta.value("crc", uint32_t(0)) != crc32(c.payload)) {
    fail(Err::kCorruptPayload, "payload checksum mismatch");
  }

  const uint32_t ow = meta.at("ow").get<uint32_t>();
  const uint32_t oh = meta.at("oh").get<uint32_t>();
  const Predictor predictor = predictor_from_name(meta.at("predictor").get<std::string>());
  const uint32_t buckets = meta.at("ctx").get<uint32_t>();
  if (buckets < 1 || buckets > 256) fail(Err::kCorruptHeader, "bad context bucket count");
  const PatchGeometry geom = PatchGeometry::for_dims(ow, oh);
  if (geom.padded_w() != c.width || geom.padded_h() != c.height) {
    fail(Err::kCorruptHeader, "container dims inconsistent with original dims");
  }

  const auto ctx_lut = make_context_lut(buckets);
  SymbolModel model(buckets);
  RangeDecoder dec(c.payload);

  TokenStream tokens;
  tokens.geometry = geom;
  tokens.channel_order =
      (c.flags & kFlagForceStacked) ? ChannelOrder::kXYZ : ChannelOrder::kRGB;
  tokens.symbols.resize(geom.symbol_count());

  const size_t patches = tokens.symbols.size() / kPatchSymbols;
  std::array<uint8_t, kPatchSymbols> patch;
  for (size_t p = 0; p < patches; ++p) {
    for (int r = 0; r < 16; ++r) {
      for (int cpos = 0; cpos < 16; ++cpos) {
        for (int ch = 0; ch < 3; ++ch) {
          const int idx = 3 * (r * 16 + cpos) + ch;
          const int left = cpos > 0 ? patch[idx - 3] : 0;
          const int above = r > 0 ? patch[idx - 48] : 0;
          int pred = 0;
          if (predictor == Predictor::kLeft) {
            pred = left;
          } else if (predictor == Predictor::kMedianEdge) {
            const int aboveleft = (r > 0 && cpos > 0) ? patch[idx - 51] : 0;
            const int est = left + above - aboveleft;
            pred = std::max(std::min(left, above), std::min(std::max(left, above), est));
          }
          const uint32_t ctx = ctx_lut[uint8_t(std::abs(left - above))];
          const uint8_t residual = kResidual.unfold[model.decode(dec, ctx)];
          patch[idx] = uint8_t(pred + residual);
        }
      }
    }
    std::copy(patch.begin(), patch.end(), tokens.symbols.begin() + p * kPatchSymbols);
  }

  TactileFrame frame = detokenize(tokens);
  if (meta.contains("map")) {
    ForceImageMapping mapping;
    for (int a = 0; a < 3; ++a) {
      mapping.scale[a] = meta["map"]["scale"][a].get<double>();
      mapping.offset[a] = meta["map"]["offset"][a].get<double>();
    }
    frame.mapping = mapping;
  }
  return frame;
}

double bits_per_byte_of(const std::vector<TactileFrame>& frames, const LosslessConfig& cfg) {
  if (frames.empty()) fail(Err::kEmptyInput, "bits_per_byte_of: no frames");
  uint64_t compressed_bits = 0;
  uint64_t raw_bytes = 0;
  for (const TactileFrame& f : frames) {
    compressed_bits += uint64_t(encode_lossless(f, cfg).size()) * 8;
    raw_bytes += f.raw_bytes();
  }
  return double(compressed_bits) / double(raw_bytes);
}

}  // namespace taco
