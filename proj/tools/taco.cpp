// taco: tactile-frame compression toolkit CLI.
//
//   taco encode --codec ID [--quality Q] IN OUT
//   taco decode IN OUT
//   taco bench --config FILE --out DIR [--threads N] [--serial-timing]
//   taco bdrate --anchor CSV --test CSV [--ms-ssim]
//   taco force2img --map FILE IN.csv OUT.ppm
//   taco rmse A B OUT_PREFIX
//   taco classify --manifest FILE --codec ID --out DIR [--classifier C] [--k N]
//
// Exit codes: 0 success, 1 configuration/input error, 2 run finished with
// recorded row failures.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "taco/bench.hpp"
#include "taco/downstream.hpp"
#include "taco/force.hpp"
#include "taco/metrics.hpp"

namespace {

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) taco::fail(taco::Err::kUnreadableFile, path.string() + ": cannot open");
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) taco::fail(taco::Err::kUnwritableOutput, path.string() + ": cannot open");
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) taco::fail(taco::Err::kUnwritableOutput, path.string() + ": write failed");
}

int cmd_encode(const std::string& codec, const std::string& quality, const std::string& in,
               const std::string& out) {
  const taco::BuiltinCodec bc = taco::BuiltinCodec::get(codec);
  taco::TactileFrame frame = taco::load_frame(in);
  const std::filesystem::path sidecar = std::filesystem::path(in).replace_extension(".map.json");
  if (std::filesystem::exists(sidecar)) {
    frame.mapping = taco::load_mapping(sidecar);
    frame.sensor_kind = taco::SensorKind::kForceStacked;
  }
  const std::string token = bc.lossless ? std::string(taco::kQualityTokenLossless) : quality;
  const std::vector<uint8_t> bytes = bc.encode(frame, token);
  write_file(out, bytes);
  std::printf("%s: %zu bytes -> %zu bytes (%.3f bits/Byte)\n", codec.c_str(), frame.raw_bytes(),
              bytes.size(), double(bytes.size()) * 8.0 / double(frame.raw_bytes()));
  return 0;
}

int cmd_decode(const std::string& in, const std::string& out) {
  const taco::TactileFrame frame = taco::decode_any(read_file(in));
  taco::save_ppm(frame, out);
  if (frame.mapping) {
    taco::save_mapping(*frame.mapping,
                       std::filesystem::path(out).replace_extension(".map.json"));
  }
  std::printf("decoded %ux%u frame -> %s\n", frame.width, frame.height, out.c_str());
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir, int threads,
              bool serial_timing) {
  taco::BenchConfig config = taco::bench_config_from_table(
      taco::load_config(config_path), std::filesystem::path(config_path).parent_path());
  if (!out_dir.empty()) config.out_dir = out_dir;
  if (config.out_dir.empty()) taco::fail(taco::Err::kConfigError, "no output directory (--out)");
  if (threads > 0) config.threads = threads;
  if (serial_timing) config.serial_timing = true;

  const std::vector<taco::BenchResult> results = taco::run_benchmark(config);
  taco::emit_report(results, config.out_dir);

  size_t failures = 0;
  for (const taco::BenchResult& r : results) failures += !r.ok();
  std::printf("%zu rows (%zu failed) -> %s\n", results.size(), failures,
              config.out_dir.string().c_str());
  return failures == 0 ? 0 : 2;
}

int cmd_bdrate(const std::string& anchor_path, const std::string& test_path, bool use_ms_ssim) {
  const taco::RdCurve anchor = taco::load_rd_curve_csv(anchor_path, "anchor");
  const taco::RdCurve test = taco::load_rd_curve_csv(test_path, "test");
  const double bd = taco::bd_rate(anchor, test,
                                  use_ms_ssim ? taco::BdQuality::kMsSsim : taco::BdQuality::kPsnr);
  std::printf("BD-Rate: %+.3f%%\n", bd);
  return 0;
}

int cmd_force2img(const std::string& map_path, const std::string& in, const std::string& out) {
  const taco::ForceImageMapping mapping = taco::load_mapping(map_path);
  const taco::ForceSequence records = taco::load_force_csv(in);
  const taco::TactileFrame frame = taco::force_to_frame(records, mapping);
  taco::save_ppm(frame, out);
  taco::save_mapping(mapping, std::filesystem::path(out).replace_extension(".map.json"));
  std::printf("stacked %zu records x %u taxels -> %s (%ux%u)\n", records.size(), frame.width,
              out.c_str(), frame.width, frame.height);
  return 0;
}

int cmd_rmse(const std::string& a_path, const std::string& b_path, const std::string& prefix) {
  const taco::TactileFrame a = taco::load_frame(a_path);
  const taco::TactileFrame b = taco::load_frame(b_path);
  const std::vector<double> map = taco::rmse_map(a, b);
  taco::save_rmse_map(map, a.width, a.height, prefix + ".pgm", prefix + ".csv");
  double mean = 0.0;
  for (double v : map) mean += v;
  mean /= double(map.size());
  const double p = taco::psnr(a, b);
  std::printf("mean per-pixel RMSE %.4f, PSNR %s dB -> %s.pgm/.csv\n", mean,
              std::isinf(p) ? "inf" : std::to_string(p).c_str(), prefix.c_str());
  return 0;
}

int cmd_classify(const std::string& manifest_path, const std::string& codec_id,
                 const std::string& out_dir, const std::string& classifier_name, int k) {
  const taco::DatasetManifest manifest = taco::load_manifest(manifest_path);
  const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  std::vector<taco::TactileFrame> frames;
  for (const taco::ManifestEntry& e : manifest.entries) {
    std::filesystem::path p = e.path;
    if (p.is_relative()) p = base / p;
    taco::TactileFrame f = taco::load_frame(p);
    f.sensor_kind = manifest.sensor_kind;
    frames.push_back(std::move(f));
  }

  taco::CodecRegistry registry;
  const taco::CodecSpec& spec = registry.get(codec_id);
  std::vector<std::string> qualities = spec.qualities;
  if (spec.is_lossless()) qualities = {taco::kQualityTokenLossless};

  const taco::Classifier classifier =
      classifier_name == "linear" ? taco::Classifier::kLinear : taco::Classifier::kKnn;
  const std::vector<taco::AccuracyPoint> points = taco::accuracy_under_compression(
      manifest, frames, spec, qualities, classifier, size_t(k));
  taco::emit_accuracy_report(points, codec_id, manifest.name, out_dir);
  for (const taco::AccuracyPoint& p : points) {
    std::printf("%-14s bpp=%8.4f  top1=%.4f\n", p.quality.c_str(), p.bpp, p.top1);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tactile-frame compression toolkit"};
  app.require_subcommand(1);

  std::string codec = "taco-ll-lite", quality = "3", in, out;
  auto* encode = app.add_subcommand("encode", "compress a raster frame");
  encode->add_option("--codec", codec, "codec id")->capture_default_str();
  encode->add_option("--quality", quality, "quality token (lossy codecs)")->capture_default_str();
  encode->add_option("in", in, "input frame (PPM/PNG)")->required();
  encode->add_option("out", out, "output bitstream")->required();

  std::string din, dout;
  auto* decode = app.add_subcommand("decode", "decompress a bitstream");
  decode->add_option("in", din, "input bitstream")->required();
  decode->add_option("out", dout, "output PPM")->required();

  std::string config_path, bench_out;
  int threads = 0;
  bool serial_timing = false;
  auto* bench = app.add_subcommand("bench", "run the benchmark grid");
  bench->add_option("--config", config_path, "config file (TOML syntax)")->required();
  bench->add_option("--out", bench_out, "output directory");
  bench->add_option("--threads", threads, "worker threads");
  bench->add_flag("--serial-timing", serial_timing, "pin timing sections to one job at a time");

  std::string anchor_path, test_path;
  bool use_ms_ssim = false;
  auto* bdrate = app.add_subcommand("bdrate", "Bjontegaard delta rate between two curves");
  bdrate->add_option("--anchor", anchor_path, "anchor results CSV")->required();
  bdrate->add_option("--test", test_path, "test results CSV")->required();
  bdrate->add_flag("--ms-ssim", use_ms_ssim, "integrate against MS-SSIM instead of PSNR");

  std::string map_path, fin, fout;
  auto* force2img = app.add_subcommand("force2img", "stack a force log into a frame");
  force2img->add_option("--map", map_path, "mapping sidecar JSON")->required();
  force2img->add_option("in", fin, "input force CSV")->required();
  force2img->add_option("out", fout, "output PPM")->required();

  std::string rmse_a, rmse_b, rmse_prefix;
  auto* rmse = app.add_subcommand("rmse", "per-pixel RMSE map between two rasters");
  rmse->add_option("a", rmse_a, "reference frame")->required();
  rmse->add_option("b", rmse_b, "reconstructed frame")->required();
  rmse->add_option("out", rmse_prefix, "output prefix (.pgm/.csv)")->required();

  std::string manifest_path, cl_codec = "taco-l-lite", cl_out, classifier = "knn";
  int k = 5;
  auto* classify = app.add_subcommand("classify", "classification under compression");
  classify->add_option("--manifest", manifest_path, "labeled, split manifest")->required();
  classify->add_option("--codec", cl_codec, "codec id")->capture_default_str();
  classify->add_option("--out", cl_out, "output directory")->required();
  classify->add_option("--classifier", classifier, "knn|linear")->capture_default_str();
  classify->add_option("--k", k, "neighbor count for knn")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (encode->parsed()) return cmd_encode(codec, quality, in, out);
    if (decode->parsed()) return cmd_decode(din, dout);
    if (bench->parsed()) return cmd_bench(config_path, bench_out, threads, serial_timing);
    if (bdrate->parsed()) return cmd_bdrate(anchor_path, test_path, use_ms_ssim);
    if (force2img->parsed()) return cmd_force2img(map_path, fin, fout);
    if (rmse->parsed()) return cmd_rmse(rmse_a, rmse_b, rmse_prefix);
    if (classify->parsed()) return cmd_classify(manifest_path, cl_codec, cl_out, classifier, k);
  } catch (const taco::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
