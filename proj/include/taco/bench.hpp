#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "taco/codec.hpp"
#include "taco/config.hpp"
#include "taco/manifest.hpp"
#include "taco/metrics.hpp"

namespace taco {

enum class CodecKind : uint8_t {
  kBuiltinLossless,
  kBuiltinLossy,
  kExternalLossless,
  kExternalLossy,
};

// Registry entry. External codecs are command templates with {in}, {out} and
// (for lossy) {quality} placeholders, run through the shell on temp files;
// compressed size is the output file size in bytes.
struct CodecSpec {
  std::string id;
  CodecKind kind = CodecKind::kBuiltinLossless;
  std::string encode_cmd;  // external only
  std::string decode_cmd;  // external only
  std::vector<std::string> qualities;

  bool is_external() const {
    return kind == CodecKind::kExternalLossless || kind == CodecKind::kExternalLossy;
  }
  bool is_lossless() const {
    return kind == CodecKind::kBuiltinLossless || kind == CodecKind::kExternalLossless;
  }
};

class CodecRegistry {
 public:
  CodecRegistry();  // pre-populated with the built-ins

  // Validates command templates ({in} and {out} required) and id uniqueness.
  void register_external(const CodecSpec& spec);

  const CodecSpec& get(const std::string& id) const;  // throws kUnknownCodec
  bool contains(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::vector<CodecSpec> specs_;
};

struct CodecTiming {
  double enc_kbps = 0.0;
  double dec_kbps = 0.0;
  double enc_fps = 0.0;
  double dec_fps = 0.0;
};

// Wall-clock timing protocol: the first two frames are warm-up and excluded;
// the rest are measured as median-of-3 runs. Requires >= 10 frames.
CodecTiming time_codec(const std::vector<TactileFrame>& frames,
                       const std::function<void(const TactileFrame&)>& encode_one,
                       const std::function<void(size_t)>& decode_one);

struct BenchResult {
  std::string codec_id;
  std::string dataset;
  std::string quality;
  double bits_per_byte = 0.0;       // dataset aggregate: sum bits / sum raw bytes
  double bits_per_byte_mean = 0.0;  // mean of per-frame values (report-only)
  double ratio = 0.0;
  double bpp = 0.0;
  double psnr = 0.0;  // kPsnrInf for verified lossless rows
  std::optional<double> ms_ssim{};
  std::optional<CodecTiming> timing{};
  size_t frames = 0;
  double wall_s = 0.0;
  std::string status = "ok";  // "ok", "lossless_violation", "error: ..."

  bool ok() const { return status == "ok"; }
};

struct BenchConfig {
  std::vector<std::filesystem::path> datasets;  // manifest paths
  std::vector<std::string> codecs;              // registry ids to run
  CodecRegistry registry;
  int threads = 1;
  bool serial_timing = false;  // pin timing sections to one at a time
  std::filesystem::path out_dir;
};

// Builds a BenchConfig from a parsed config file. Strings in `codecs` name
// built-ins; inline tables define external codecs (keys: id, kind, encode,
// decode, qualities).
BenchConfig bench_config_from_table(const ConfigTable& table,
                                    const std::filesystem::path& base_dir);

// Runs the full (codec x dataset x quality) grid. Row failures are recorded
// in-place (status column), never abort the run. Rows come back sorted by
// (codec, dataset, quality) regardless of thread count.
std::vector<BenchResult> run_benchmark(const BenchConfig& config);

// results.csv + report.md + one RD plot per dataset with >= 2 lossy points.
void emit_report(const std::vector<BenchResult>& results, const std::filesystem::path& out_dir);

std::string results_to_csv(const std::vector<BenchResult>& results);

// Reads RD points out of a results.csv (or any CSV with bpp/psnr_db and
// optional ms_ssim columns), one curve per file.
RdCurve load_rd_curve_csv(const std::filesystem::path& path, const std::string& label);

// In-memory round trip through an external codec: the frame goes out as a
// temp PPM, comes back as a decoded raster. Returns the reconstruction and
// the compressed size in bytes.
std::pair<TactileFrame, uint64_t> external_roundtrip(const CodecSpec& spec,
                                                     const TactileFrame& frame,
                                                     const std::string& quality);

}  // namespace taco
