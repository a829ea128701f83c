#include "taco/prob_model.hpp"

#include <cmath>

namespace taco {

void FreqTable::reset() {
  counts_.fill(1);
  groups_.fill(16);
  total_ = 256;
}

FreqTable FreqTable::from_distribution(std::span<const double> probs) {
  if (probs.size() != 256) fail(Err::kDimensionMismatch, "distribution must have 256 entries");
  FreqTable t;
  t.total_ = 0;
  t.groups_.fill(0);
  const double scale = double(t.params_.max_total - 256);
  for (int s = 0; s < 256; ++s) {
    const double p = probs[s] < 0.0 ? 0.0 : probs[s];
    const uint32_t c = 1 + uint32_t(p * scale);
    t.counts_[s] = c;
    t.groups_[s >> 4] += c;
    t.total_ += c;
  }
  return t;
}

FreqTable::SymbolRange FreqTable::lookup(uint8_t symbol) const {
  uint32_t cum = 0;
  const uint32_t g = symbol >> 4;
  for (uint32_t i = 0; i < g; ++i) cum += groups_[i];
  for (uint32_t s = g << 4; s < symbol; ++s) cum += counts_[s];
  return {cum, counts_[symbol]};
}

uint8_t FreqTable::find(uint32_t v, SymbolRange& out) const {
  uint32_t cum = 0;
  uint32_t g = 0;
  while (cum + groups_[g] <= v) cum += groups_[g++];
  uint32_t s = g << 4;
  while (cum + counts_[s] <= v) cum += counts_[s++];
  out = {cum, counts_[s]};
  return uint8_t(s);
}

void FreqTable::update(uint8_t symbol) {
  counts_[symbol] += params_.increment;
  groups_[symbol >> 4] += params_.increment;
  total_ += params_.increment;
  if (total_ > params_.max_total) {
    total_ = 0;
    groups_.fill(0);
    for (int s = 0; s < 256; ++s) {
      counts_[s] = (counts_[s] + 1) >> 1;
      groups_[s >> 4] += counts_[s];
      total_ += counts_[s];
    }
  }
}

double SymbolModel::bits(uint32_t ctx, uint8_t symbol) {
  FreqTable& t = tables_[ctx];
  const auto r = t.lookup(symbol);
  const double b = std::log2(double(t.total())) - std::log2(double(r.freq));
  if (adaptive_) t.update(symbol);
  return b;
}

uint64_t SymbolModel::state_hash() const {
  uint64_t h = 0xCBF29CE484222325ull;
  auto mix = [&h](uint32_t v) {
    h ^= v;
    h *= 0x100000001B3ull;
  };
  for (const FreqTable& t : tables_) {
    mix(t.total());
    for (int s = 0; s < 256; ++s) mix(t.count(uint8_t(s)));
  }
  return h;
}

ProbabilityModel ProbabilityModel::order1(uint32_t context_bits, ModelParams params) {
  const uint32_t contexts = 1u << context_bits;
  const uint32_t shift = 8 - context_bits;
  return {SymbolModel(contexts, params),
          [shift](std::span<const uint8_t> history) -> uint32_t {
            return history.empty() ? 0u : uint32_t(history.back()) >> shift;
          }};
}

Bitstream encode_symbols(std::span<const uint8_t> symbols, ProbabilityModel& model) {
  RangeEncoder enc;
  for (size_t i = 0; i < symbols.size(); ++i) {
    const uint32_t ctx = model.context ? model.context(symbols.first(i)) : 0;
    model.model.encode(enc, ctx, symbols[i]);
  }
  return enc.finish();
}

std::vector<uint8_t> decode_symbols(const Bitstream& bits, size_t n, ProbabilityModel& model) {
  std::vector<uint8_t> symbols;
  if (n == 0) return symbols;
  symbols.reserve(n);
  RangeDecoder dec(bits.bytes);
  for (size_t i = 0; i < n; ++i) {
    const uint32_t ctx = model.context ? model.context(std::span(symbols)) : 0;
    symbols.push_back(model.model.decode(dec, ctx));
  }
  return symbols;
}

double cross_entropy_bits(std::span<const uint8_t> symbols, ProbabilityModel& model) {
  double bits = 0.0;
  for (size_t i = 0; i < symbols.size(); ++i) {
    const uint32_t ctx = model.context ? model.context(symbols.first(i)) : 0;
    bits += model.model.bits(ctx, symbols[i]);
  }
  return bits;
}

}  // namespace taco
