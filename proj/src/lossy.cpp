#include "taco/lossy.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "taco/kernels.hpp"
#include "taco/prob_model.hpp"

namespace taco {

QualityPoint QualityPoint::standard(uint8_t index) {
  if (index > 3) fail(Err::kNonPositiveInput, "standard quality index must be 0..3");
  QualityPoint q = from_lambda(kLambdaSet[index]);
  q.index = index;
  return q;
}

QualityPoint QualityPoint::from_lambda(double lambda) {
  if (!(lambda > 0.0)) fail(Err::kNonPositiveInput, "lambda must be positive");
  const long step = std::lround(std::sqrt(12.0 / lambda));
  return {254, lambda, uint32_t(std::clamp(step, 1l, 256l))};
}

std::vector<QualityPoint> QualityPoint::standard_sweep() {
  return {standard(0), standard(1), standard(2), standard(3)};
}

namespace {

constexpr int kBlock = 8;
constexpr int kBlockSamples = 64;

// Zigzag scan order for an 8x8 block.
constexpr uint8_t kZigzag[kBlockSamples] = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

// Context layout. Luma and chroma adapt separately; AC contexts bucket the
// zigzag position into frequency bands.
constexpr uint32_t kCtxDc = 0;        // +group            (2)
constexpr uint32_t kCtxLast = 2;      // +group            (2)
constexpr uint32_t kCtxAc = 4;        // +group*6 + band   (12)
constexpr uint32_t kCtxEscapeLo = 16;
constexpr uint32_t kCtxEscapeHi = 17;
constexpr uint32_t kCtxCount = 18;

uint32_t ac_band(int zigzag_pos) {
  if (zigzag_pos <= 2) return 0;
  if (zigzag_pos <= 5) return 1;
  if (zigzag_pos <= 9) return 2;
  if (zigzag_pos <= 20) return 3;
  if (zigzag_pos <= 34) return 4;
  return 5;
}

uint32_t to_unsigned(int v) { return v >= 0 ? uint32_t(2 * v) : uint32_t(-2 * v - 1); }
int from_unsigned(uint32_t u) { return (u & 1) ? -int((u + 1) / 2) : int(u / 2); }

// Integer tokens: values below 255 are a single symbol; larger ones pay a
// 255 escape plus two bytes.
void encode_int(RangeEncoder& enc, SymbolModel& model, uint32_t ctx, int v) {
  const uint32_t u = to_unsigned(v);
  if (u < 255) {
    model.encode(enc, ctx, uint8_t(u));
    return;
  }
  const uint32_t rest = u - 255;
  if (rest > 0xFFFF) fail(Err::kNonPositiveInput, "coefficient magnitude out of range");
  model.encode(enc, ctx, 255);
  model.encode(enc, kCtxEscapeLo, uint8_t(rest & 0xFF));
  model.encode(enc, kCtxEscapeHi, uint8_t(rest >> 8));
}

int decode_int(RangeDecoder& dec, SymbolModel& model, uint32_t ctx) {
  uint32_t u = model.decode(dec, ctx);
  if (u == 255) {
    const uint32_t lo = model.decode(dec, kCtxEscapeLo);
    const uint32_t hi = model.decode(dec, kCtxEscapeHi);
    u = 255 + lo + (hi << 8);
  }
  return from_unsigned(u);
}

struct Plane16 {
  std::vector<int16_t> data;
  uint32_t w = 0, h = 0;
};

nlohmann::json lossy_metadata(const TactileFrame& frame, const QualityPoint& q) {
  nlohmann::json meta;
  meta["ow"] = frame.width;
  meta["oh"] = frame.height;
  meta["sensor"] = frame.sensor_kind == SensorKind::kForceStacked ? "force" : "visuo";
  if (frame.mapping) {
    meta["map"] = {{"scale", frame.mapping->scale}, {"offset", frame.mapping->offset}};
  }
  meta["lambda"] = q.lambda;
  meta["step"] = q.step;
  return meta;
}

}  // namespace

int quantize_ac_coefficient(double c, uint32_t step) {
  const double a = std::abs(c) / double(step);
  const int q = int(a);  // floor, a >= 0
  return c < 0.0 ? -q : q;
}

double dequantize_ac_coefficient(int level, uint32_t step) {
  if (level == 0) return 0.0;
  const double mag = (std::abs(double(level)) + 0.5) * double(step);
  return level < 0 ? -mag : mag;
}

std::vector<uint8_t> encode_lossy(const TactileFrame& frame, const QualityPoint& q) {
  frame.validate();
  if (q.step < 1 || q.step > 256) fail(Err::kNonPositiveInput, "quantizer step out of range");

  const auto& kern = kernels::active_kernels();
  const uint32_t cw = round_up(frame.width, kBlock);
  const uint32_t ch = round_up(frame.height, kBlock);
  const TactileFrame padded = pad_frame(frame, cw, ch);
  const size_t n = size_t(cw) * ch;

  // Color decorrelation into three int16 planes.
  Plane16 planes[3];
  for (Plane16& p : planes) {
    p.w = cw;
    p.h = ch;
    p.data.resize(n);
  }
  kern.ycocgr_forward(padded.pixels.data(), planes[0].data.data(), planes[1].data.data(),
                      planes[2].data.data(), n);

  SymbolModel model(kCtxCount);
  RangeEncoder enc;
  const uint32_t blocks_x = cw / kBlock;
  const uint32_t blocks_y = ch / kBlock;

  for (int comp = 0; comp < 3; ++comp) {
    const Plane16& plane = planes[comp];
    const uint32_t group = comp == 0 ? 0 : 1;
    const int dc_shift = comp == 0 ? 128 : 0;  // center luma like the chroma planes
    int prev_dc = 0;

    for (uint32_t by = 0; by < blocks_y; ++by) {
      for (uint32_t bx = 0; bx < blocks_x; ++bx) {
        double block[kBlockSamples];
        for (int y = 0; y < kBlock; ++y) {
          const int16_t* row = plane.data.data() + size_t(by * kBlock + y) * cw + bx * kBlock;
          for (int x = 0; x < kBlock; ++x) block[y * kBlock + x] = double(row[x] - dc_shift);
        }
        double coef[kBlockSamples];
        kern.dct8x8_forward(block, coef);

        int levels[kBlockSamples];
        levels[0] = int(std::lround(coef[0]));
        int last = 0;
        for (int i = 1; i < kBlockSamples; ++i) {
          levels[i] = quantize_ac_coefficient(coef[kZigzag[i]], q.step);
          if (levels[i] != 0) last = i;
        }

        encode_int(enc, model, kCtxDc + group, levels[0] - prev_dc);
        prev_dc = levels[0];
        model.encode(enc, kCtxLast + group, uint8_t(last));
        for (int i = 1; i <= last; ++i) {
          encode_int(enc, model, kCtxAc + group * 6 + ac_band(i), levels[i]);
        }
      }
    }
  }
  Bitstream bits = enc.finish();

  nlohmann::json meta = lossy_metadata(frame, q);
  meta["crc"] = crc32(bits.bytes);

  Container c;
  c.codec_id = kCodecIdLossyLite;
  c.flags = frame.sensor_kind == SensorKind::kForceStacked ? kFlagForceStacked : 0;
  c.width = uint16_t(cw);
  c.height = uint16_t(ch);
  c.quality = q.index;
  c.metadata = meta.dump();
  c.payload = std::move(bits.bytes);
  return write_container(c);
}

TactileFrame decode_lossy(const std::vector<uint8_t>& bytes) {
  const Container c = read_container(bytes);
  if (c.codec_id != kCodecIdLossyLite) fail(Err::kCorruptHeader, "not a lossy-lite stream");

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(c.metadata);
  } catch (const nlohmann::json::exception& e) {
    fail(Err::kCorruptHeader, std::string("bad container metadata: ") + e.what());
  }
  if (meta.value("crc", uint32_t(0)) != crc32(c.payload)) {
    fail(Err::kCorruptPayload, "payload checksum mismatch");
  }
  const uint32_t step = meta.at("step").get<uint32_t>();
  if (step < 1 || step > 256) fail(Err::kCorruptHeader, "bad quantizer step");
  const uint32_t ow = meta.at("ow").get<uint32_t>();
  const uint32_t oh = meta.at("oh").get<uint32_t>();
  if (round_up(ow, kBlock) != c.width || round_up(oh, kBlock) != c.height) {
    fail(Err::kCorruptHeader, "container dims inconsistent with original dims");
  }

  const auto& kern = kernels::active_kernels();
  const uint32_t cw = c.width;
  const uint32_t chh = c.height;
  const size_t n = size_t(cw) * chh;

  Plane16 planes[3];
  for (Plane16& p : planes) {
    p.w = cw;
    p.h = chh;
    p.data.resize(n);
  }

  SymbolModel model(kCtxCount);
  RangeDecoder dec(c.payload);
  const uint32_t blocks_x = cw / kBlock;
  const uint32_t blocks_y = chh / kBlock;

  for (int comp = 0; comp < 3; ++comp) {
    Plane16& plane = planes[comp];
    const uint32_t group = comp == 0 ? 0 : 1;
    const int dc_shift = comp == 0 ? 128 : 0;
    int prev_dc = 0;

    for (uint32_t by = 0; by < blocks_y; ++by) {
      for (uint32_t bx = 0; bx < blocks_x; ++bx) {
        int levels[kBlockSamples] = {0};
        prev_dc += decode_int(dec, model, kCtxDc + group);
        levels[0] = prev_dc;
        const int last = model.decode(dec, kCtxLast + group);
        if (last > 63) fail(Err::kCorruptPayload, "bad end-of-block index");
        for (int i = 1; i <= last; ++i) {
          levels[i] = decode_int(dec, model, kCtxAc + group * 6 + ac_band(i));
        }

        double coef[kBlockSamples] = {0.0};
        coef[0] = double(levels[0]);
        for (int i = 1; i < kBlockSamples; ++i) {
          coef[kZigzag[i]] = dequantize_ac_coefficient(levels[i], step);
        }
        double block[kBlockSamples];
        kern.dct8x8_inverse(coef, block);

        for (int y = 0; y < kBlock; ++y) {
          int16_t* row = plane.data.data() + size_t(by * kBlock + y) * cw + bx * kBlock;
          for (int x = 0; x < kBlock; ++x) {
            const long v = std::lround(block[y * kBlock + x]) + dc_shift;
            row[x] = int16_t(std::clamp(v, -8192l, 8191l));
          }
        }
      }
    }
  }

  TactileFrame padded(cw, chh);
  padded.orig_width = ow;
  padded.orig_height = oh;
  kern.ycocgr_inverse(planes[0].data.data(), planes[1].data.data(), planes[2].data.data(),
                      padded.pixels.data(), n);

  padded.sensor_kind =
      (c.flags & kFlagForceStacked) ? SensorKind::kForceStacked : SensorKind::kVisuoTactile;
  TactileFrame frame = crop_to_recorded(padded);
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

double rd_cost(const TactileFrame& frame, const TactileFrame& recon, uint64_t bits,
               double lambda) {
  if (!frame.same_dims(recon)) fail(Err::kDimensionMismatch, "rd_cost: frame dims differ");
  return double(bits) + lambda * mse(frame, recon) * double(frame.sample_count());
}

RdCurve rd_sweep(const std::vector<TactileFrame>& frames,
                 const std::vector<QualityPoint>& qualities, const std::string& label) {
  if (frames.empty()) fail(Err::kEmptyInput, "rd_sweep: no frames");
  if (qualities.size() < 2) fail(Err::kEmptyInput, "rd_sweep: need at least 2 qualities");

  RdCurve curve;
  curve.label = label;
  for (const QualityPoint& q : qualities) {
    uint64_t bits = 0;
    uint64_t pixels = 0;
    uint64_t sse = 0;
    uint64_t samples = 0;
    double ssim_sum = 0.0;
    size_t ssim_count = 0;
    for (const TactileFrame& f : frames) {
      const std::vector<uint8_t> enc = encode_lossy(f, q);
      const TactileFrame recon = decode_lossy(enc);
      bits += uint64_t(enc.size()) * 8;
      pixels += uint64_t(f.width) * f.height;
      sse += kernels::active_kernels().sse_u8(f.pixels.data(), recon.pixels.data(),
                                              f.pixels.size());
      samples += f.sample_count();
      try {
        ssim_sum += ms_ssim(f, recon);
        ++ssim_count;
      } catch (const Error& e) {
        if (e.code() != Err::kTooSmallForAnyScale) throw;
      }
    }
    RdPoint point;
    point.bpp = double(bits) / double(pixels);
    point.psnr = psnr_from_mse(double(sse) / double(samples));
    if (ssim_count > 0) point.ms_ssim = ssim_sum / double(ssim_count);
    curve.points.push_back(point);
  }
  std::sort(curve.points.begin(), curve.points.end(),
            [](const RdPoint& a, const RdPoint& b) { return a.bpp < b.bpp; });
  return curve;
}

}  // namespace taco
