#include "taco/container.hpp"

#include <cstring>

namespace taco {

namespace {

constexpr char kMagic[4] = {'T', 'A', 'C', 'B'};

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(uint8_t(v & 0xFF));
  out.push_back(uint8_t(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(uint8_t((v >> (8 * i)) & 0xFF));
}

struct Reader {
  const uint8_t* p;
  size_t left;

  void need(size_t n) const {
    if (left < n) fail(Err::kCorruptHeader, "container header truncated");
  }
  uint8_t u8() {
    need(1);
    --left;
    return *p++;
  }
  uint16_t u16() {
    need(2);
    uint16_t v = uint16_t(p[0]) | uint16_t(p[1]) << 8;
    p += 2;
    left -= 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(p[i]) << (8 * i);
    p += 4;
    left -= 4;
    return v;
  }
};

}  // namespace

std::vector<uint8_t> write_container(const Container& c) {
  if (c.metadata.size() > 0xFFFF) fail(Err::kUnsupportedFormat, "metadata too large");
  std::vector<uint8_t> out;
  out.reserve(15 + c.metadata.size() + 4 + c.payload.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kContainerVersion);
  out.push_back(c.codec_id);
  out.push_back(c.flags);
  put_u16(out, c.width);
  put_u16(out, c.height);
  out.push_back(c.channels);
  out.push_back(c.quality);
  put_u16(out, uint16_t(c.metadata.size()));
  out.insert(out.end(), c.metadata.begin(), c.metadata.end());
  put_u32(out, uint32_t(c.payload.size()));
  out.insert(out.end(), c.payload.begin(), c.payload.end());
  return out;
}

Container read_container(const std::vector<uint8_t>& bytes) {
  Reader r{bytes.data(), bytes.size()};
  r.need(4);
  if (std::memcmp(r.p, kMagic, 4) != 0) fail(Err::kCorruptHeader, "bad container magic");
  r.p += 4;
  r.left -= 4;

  const uint8_t version = r.u8();
  if (version != kContainerVersion) {
    fail(Err::kVersionMismatch, "unsupported container version " + std::to_string(version));
  }

  Container c;
  c.codec_id = r.u8();
  c.flags = r.u8();
  c.width = r.u16();
  c.height = r.u16();
  c.channels = r.u8();
  c.quality = r.u8();
  if (c.codec_id > kCodecIdStore) fail(Err::kCorruptHeader, "unknown codec id");
  if (c.channels != 3) fail(Err::kCorruptHeader, "container channels must be 3");

  const uint16_t meta_len = r.u16();
  r.need(meta_len);
  c.metadata.assign(reinterpret_cast<const char*>(r.p), meta_len);
  r.p += meta_len;
  r.left -= meta_len;

  const uint32_t payload_len = r.u32();
  if (r.left < payload_len) fail(Err::kTruncatedBitstream, "container payload truncated");
  c.payload.assign(r.p, r.p + payload_len);
  return c;
}

}  // namespace taco
