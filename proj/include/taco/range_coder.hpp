#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "taco/common.hpp"

namespace taco {

// Self-describing compressed payload. The coder emits whole bytes; bit_len
// tracks the nominal length and always satisfies
// bit_len <= 8*bytes.size() <= bit_len + 7.
struct Bitstream {
  std::vector<uint8_t> bytes;
  uint64_t bit_len = 0;
};

// Carry-less byte-oriented range coder (32-bit state, 16-bit probability
// precision). Integer-only: identical inputs produce identical bytes on any
// platform. Frequencies must satisfy freq >= 1, cum + freq <= total <= 2^16.
//
// Renormalization emits a byte while the top byte of low is settled; when
// the range underflows below 2^16 without settling, the interval is clipped
// to the next 2^24 boundary (the classic carry-free trick), which costs a
// fraction of a bit but never a carry.
class RangeEncoder {
 public:
  static constexpr uint32_t kTop = 1u << 24;
  static constexpr uint32_t kBot = 1u << 16;
  static constexpr uint32_t kMaxTotal = 1u << 16;

  void encode(uint32_t cum, uint32_t freq, uint32_t total) {
    range_ /= total;
    low_ += cum * range_;
    range_ *= freq;
    normalize();
  }

  // Terminates the stream; 4 tail bytes pin the final interval.
  Bitstream finish() {
    for (int i = 0; i < 4; ++i) {
      out_.push_back(uint8_t(low_ >> 24));
      low_ <<= 8;
    }
    Bitstream bits;
    bits.bit_len = uint64_t(out_.size()) * 8;
    bits.bytes = std::move(out_);
    reset();
    return bits;
  }

  void reset() {
    out_.clear();
    low_ = 0;
    range_ = 0xFFFFFFFFu;
  }

 private:
  void normalize() {
    for (;;) {
      if ((low_ ^ (low_ + range_)) < kTop) {
        // top byte settled, emit it
      } else if (range_ < kBot) {
        range_ = (0u - low_) & (kBot - 1);
      } else {
        break;
      }
      out_.push_back(uint8_t(low_ >> 24));
      low_ <<= 8;
      range_ <<= 8;
    }
  }

  std::vector<uint8_t> out_;
  uint32_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
};

// Mirror of RangeEncoder. Runs the identical renormalization sequence, so it
// consumes exactly the bytes the encoder produced; running out of bytes
// mid-stream means the input was truncated.
class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const uint8_t> bytes) : pos_(bytes.data()), end_(bytes.data() + bytes.size()) {
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
  }

  // Returns a value v in [0, total); the caller maps it to the symbol whose
  // cumulative interval contains v, then calls consume().
  uint32_t decode_freq(uint32_t total) {
    range_ /= total;
    uint32_t v = (code_ - low_) / range_;
    if (v >= total) fail(Err::kCorruptPayload, "range decoder: value outside model total");
    return v;
  }

  void consume(uint32_t cum, uint32_t freq) {
    low_ += cum * range_;
    range_ *= freq;
    for (;;) {
      if ((low_ ^ (low_ + range_)) < RangeEncoder::kTop) {
      } else if (range_ < RangeEncoder::kBot) {
        range_ = (0u - low_) & (RangeEncoder::kBot - 1);
      } else {
        break;
      }
      code_ = (code_ << 8) | next_byte();
      low_ <<= 8;
      range_ <<= 8;
    }
  }

 private:
  uint8_t next_byte() {
    if (pos_ == end_) fail(Err::kTruncatedBitstream, "range decoder: bitstream exhausted");
    return *pos_++;
  }

  const uint8_t* pos_;
  const uint8_t* end_;
  uint32_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint32_t code_ = 0;
};

}  // namespace taco
