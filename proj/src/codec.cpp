#include "taco/codec.hpp"

#include <charconv>

#include "json.hpp"
#include "taco/container.hpp"

namespace taco {

std::vector<uint8_t> encode_store(const TactileFrame& frame) {
  frame.validate();
  nlohmann::json meta;
  meta["ow"] = frame.width;
  meta["oh"] = frame.height;
  meta["sensor"] = frame.sensor_kind == SensorKind::kForceStacked ? "force" : "visuo";
  if (frame.mapping) {
    meta["map"] = {{"scale", frame.mapping->scale}, {"offset", frame.mapping->offset}};
  }
  meta["crc"] = crc32(frame.pixels);

  Container c;
  c.codec_id = kCodecIdStore;
  c.flags = frame.sensor_kind == SensorKind::kForceStacked ? kFlagForceStacked : 0;
  c.width = uint16_t(frame.width);
  c.height = uint16_t(frame.height);
  c.quality = kQualityLossless;
  c.metadata = meta.dump();
  c.payload = frame.pixels;
  return write_container(c);
}

TactileFrame decode_store(const std::vector<uint8_t>& bytes) {
  const Container c = read_container(bytes);
  if (c.codec_id != kCodecIdStore) fail(Err::kCorruptHeader, "not a store stream");

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(c.metadata);
  } catch (const nlohmann::json::exception& e) {
    fail(Err::kCorruptHeader, std::string("bad container metadata: ") + e.what());
  }
  if (meta.value("crc", uint32_t(0)) != crc32(c.payload)) {
    fail(Err::kCorruptPayload, "payload checksum mismatch");
  }

  TactileFrame frame(c.width, c.height);
  if (c.payload.size() != frame.pixels.size()) {
    fail(Err::kCountMismatch, "store payload size does not match frame dims");
  }
  frame.pixels = c.payload;
  frame.sensor_kind =
      (c.flags & kFlagForceStacked) ? SensorKind::kForceStacked : SensorKind::kVisuoTactile;
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

TactileFrame decode_any(const std::vector<uint8_t>& bytes) {
  const Container c = read_container(bytes);
  switch (c.codec_id) {
    case kCodecIdStore: return decode_store(bytes);
    case kCodecIdLosslessLite: return decode_lossless(bytes);
    case kCodecIdLossyLite: return decode_lossy(bytes);
    default: fail(Err::kCorruptHeader, "container written by an external codec");
  }
}

namespace {

uint8_t parse_quality_index(const std::string& quality) {
  int idx = -1;
  auto [ptr, ec] = std::from_chars(quality.data(), quality.data() + quality.size(), idx);
  if (ec != std::errc() || ptr != quality.data() + quality.size() || idx < 0 || idx > 3) {
    fail(Err::kUnknownCodec, "lossy quality token must be 0..3, got '" + quality + "'");
  }
  return uint8_t(idx);
}

}  // namespace

std::vector<uint8_t> BuiltinCodec::encode(const TactileFrame& frame,
                                          const std::string& quality) const {
  if (id == kCodecStore) return encode_store(frame);
  if (id == kCodecLosslessLite) return encode_lossless(frame);
  return encode_lossy(frame, QualityPoint::standard(parse_quality_index(quality)));
}

TactileFrame BuiltinCodec::decode(const std::vector<uint8_t>& bytes) const {
  return decode_any(bytes);
}

bool BuiltinCodec::is_builtin(const std::string& id) {
  return id == kCodecStore || id == kCodecLosslessLite || id == kCodecLossyLite;
}

BuiltinCodec BuiltinCodec::get(const std::string& id) {
  if (id == kCodecStore) return {id, true, {kQualityTokenLossless}};
  if (id == kCodecLosslessLite) return {id, true, {kQualityTokenLossless}};
  if (id == kCodecLossyLite) return {id, false, {"0", "1", "2", "3"}};
  fail(Err::kUnknownCodec, "unknown builtin codec: " + id);
}

}  // namespace taco
