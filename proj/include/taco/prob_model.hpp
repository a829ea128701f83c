#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "taco/range_coder.hpp"

namespace taco {

// Adaptation parameters. Counts start at 1 (no zero-probability symbol),
// grow by `increment` per observation, and all counts halve (rounding up)
// once the total exceeds `max_total`, which also keeps the total within the
// coder's 16-bit probability precision.
struct ModelParams {
  uint32_t increment = 32;
  uint32_t max_total = 1u << 16;
};

// Frequency table over the 256-symbol alphabet with 16-entry group sums so
// encode and decode lookups cost at most 32 steps.
class FreqTable {
 public:
  explicit FreqTable(ModelParams params = {}) : params_(params) { reset(); }

  void reset();

  // Builds a static (non-adapting) table matching `probs`; probabilities are
  // quantized to counts 1 + floor(p * (max_total - 256)).
  static FreqTable from_distribution(std::span<const double> probs);

  struct SymbolRange {
    uint32_t cum;
    uint32_t freq;
  };

  SymbolRange lookup(uint8_t symbol) const;

  // Finds the symbol whose interval contains v; also returns its range.
  uint8_t find(uint32_t v, SymbolRange& out) const;

  void update(uint8_t symbol);

  uint32_t total() const { return total_; }
  uint32_t count(uint8_t symbol) const { return counts_[symbol]; }

 private:
  std::array<uint32_t, 256> counts_;
  std::array<uint32_t, 16> groups_;
  uint32_t total_ = 0;
  ModelParams params_;
};

// A bank of adaptive frequency tables, one per context. Encoder and decoder
// instances fed the same symbol/context sequence stay in lockstep
// (state_hash() lets tests assert it).
class SymbolModel {
 public:
  explicit SymbolModel(uint32_t contexts = 1, ModelParams params = {})
      : tables_(contexts, FreqTable(params)) {}

  static SymbolModel static_order0(std::span<const double> probs) {
    SymbolModel m(1);
    m.tables_[0] = FreqTable::from_distribution(probs);
    m.adaptive_ = false;
    return m;
  }

  void encode(RangeEncoder& enc, uint32_t ctx, uint8_t symbol) {
    FreqTable& t = tables_[ctx];
    const auto r = t.lookup(symbol);
    enc.encode(r.cum, r.freq, t.total());
    if (adaptive_) t.update(symbol);
  }

  uint8_t decode(RangeDecoder& dec, uint32_t ctx) {
    FreqTable& t = tables_[ctx];
    FreqTable::SymbolRange r{};
    const uint8_t symbol = t.find(dec.decode_freq(t.total()), r);
    dec.consume(r.cum, r.freq);
    if (adaptive_) t.update(symbol);
    return symbol;
  }

  // Model cost in bits, -log2 p(symbol | ctx), with the same adaptation as
  // the coding paths but no bitstream.
  double bits(uint32_t ctx, uint8_t symbol);

  uint32_t contexts() const { return uint32_t(tables_.size()); }
  uint64_t state_hash() const;

 private:
  std::vector<FreqTable> tables_;
  bool adaptive_ = true;
};

// Deterministic map from decoded history to a context id.
using ContextFn = std::function<uint32_t(std::span<const uint8_t> history)>;

// A symbol model paired with its context function; the form the module-level
// coding operations consume.
struct ProbabilityModel {
  SymbolModel model;
  ContextFn context;  // null means order-0 (single context)

  static ProbabilityModel order0(ModelParams params = {}) {
    return {SymbolModel(1, params), nullptr};
  }
  // Order-1: context is the previous symbol's high bits.
  static ProbabilityModel order1(uint32_t context_bits = 4, ModelParams params = {});
  static ProbabilityModel static_order0(std::span<const double> probs) {
    return {SymbolModel::static_order0(probs), nullptr};
  }
};

Bitstream encode_symbols(std::span<const uint8_t> symbols, ProbabilityModel& model);

std::vector<uint8_t> decode_symbols(const Bitstream& bits, size_t n, ProbabilityModel& model);

// Sum of -log2 p(x_i | x_<i) under the adaptive model; the entropy-coded
// length exceeds this by at most the coder overhead (bounded, ~tail bytes).
double cross_entropy_bits(std::span<const uint8_t> symbols, ProbabilityModel& model);

}  // namespace taco
