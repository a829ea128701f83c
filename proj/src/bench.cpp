#include "taco/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "taco/force.hpp"
#include "taco/kernels.hpp"
#include "taco/svg.hpp"

namespace taco {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::mutex g_timing_mutex;  // serial-timing mode pins measurements to one job

// ---- external command plumbing ----

bool has_placeholder(const std::string& tmpl, const char* name) {
  return tmpl.find(name) != std::string::npos;
}

std::string substitute(std::string tmpl, const std::string& in, const std::string& out,
                       const std::string& quality) {
  auto replace_all = [](std::string& s, const std::string& from, const std::string& to) {
    size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
      s.replace(pos, from.size(), to);
      pos += to.size();
    }
  };
  replace_all(tmpl, "{in}", "'" + in + "'");
  replace_all(tmpl, "{out}", "'" + out + "'");
  replace_all(tmpl, "{quality}", quality);
  return tmpl;
}

void run_command(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    fail(Err::kExternalCommandFailure,
         "command failed (exit " + std::to_string(rc) + "): " + cmd);
  }
}

struct TempDir {
  fs::path path;

  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "taco-bench-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) fail(Err::kUnwritableOutput, "cannot create temp dir");
    path = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

std::vector<uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::kUnreadableFile, path.string() + ": cannot open");
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return bytes;
}

// ---- dataset loading ----

struct LoadedDataset {
  std::string name;
  std::vector<fs::path> files;
  std::vector<TactileFrame> frames;
  uint64_t raw_bytes = 0;
  uint64_t pixels = 0;
};

LoadedDataset load_dataset(const fs::path& manifest_path) {
  if (!fs::exists(manifest_path)) {
    fail(Err::kMissingDataset, manifest_path.string() + ": manifest not found");
  }
  const DatasetManifest manifest = load_manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();

  LoadedDataset ds;
  ds.name = manifest.name;
  for (const ManifestEntry& e : manifest.entries) {
    fs::path p = e.path;
    if (p.is_relative()) p = base / p;
    if (!fs::exists(p)) fail(Err::kMissingDataset, p.string() + ": frame file not found");
    TactileFrame frame = load_frame(p);
    frame.sensor_kind = manifest.sensor_kind;
    if (manifest.sensor_kind == SensorKind::kForceStacked) {
      fs::path sidecar = p;
      sidecar.replace_extension(".map.json");
      if (fs::exists(sidecar)) frame.mapping = load_mapping(sidecar);
    }
    ds.raw_bytes += frame.raw_bytes();
    ds.pixels += uint64_t(frame.width) * frame.height;
    ds.files.push_back(std::move(p));
    ds.frames.push_back(std::move(frame));
  }
  if (ds.frames.empty()) fail(Err::kMissingDataset, manifest_path.string() + ": empty dataset");
  return ds;
}

// ---- per-job execution ----

struct JobContext {
  const CodecSpec* spec;
  const LoadedDataset* dataset;
  std::string quality;
  bool serial_timing;
};

void maybe_time(BenchResult& row, const LoadedDataset& ds,
                const std::function<void(const TactileFrame&)>& enc,
                const std::function<void(size_t)>& dec, bool serial) {
  if (ds.frames.size() < 10) return;  // timing protocol needs warm-up + body
  if (serial) {
    std::lock_guard<std::mutex> lock(g_timing_mutex);
    row.timing = time_codec(ds.frames, enc, dec);
  } else {
    row.timing = time_codec(ds.frames, enc, dec);
  }
}

BenchResult run_builtin_job(const JobContext& job) {
  const LoadedDataset& ds = *job.dataset;
  const BuiltinCodec codec = BuiltinCodec::get(job.spec->id);
  BenchResult row;
  row.codec_id = job.spec->id;
  row.dataset = ds.name;
  row.quality = job.quality;
  row.frames = ds.frames.size();

  const auto start = Clock::now();
  uint64_t bits = 0;
  uint64_t sse = 0;
  uint64_t samples = 0;
  double bpb_mean = 0.0;
  double ssim_sum = 0.0;
  size_t ssim_n = 0;
  std::vector<std::vector<uint8_t>> encodings(ds.frames.size());

  for (size_t i = 0; i < ds.frames.size(); ++i) {
    const TactileFrame& f = ds.frames[i];
    encodings[i] = codec.encode(f, job.quality);
    bits += uint64_t(encodings[i].size()) * 8;
    bpb_mean += double(encodings[i].size()) * 8.0 / double(f.raw_bytes());

    const TactileFrame recon = codec.decode(encodings[i]);
    if (codec.lossless) {
      if (!recon.same_dims(f) || recon.pixels != f.pixels) {
        row.status = "lossless_violation";
        return row;
      }
    } else {
      sse += kernels::active_kernels().sse_u8(f.pixels.data(), recon.pixels.data(),
                                              f.pixels.size());
      samples += f.sample_count();
      try {
        ssim_sum += ms_ssim(f, recon);
        ++ssim_n;
      } catch (const Error& e) {
        if (e.code() != Err::kTooSmallForAnyScale) throw;
      }
    }
  }

  row.bits_per_byte = double(bits) / double(ds.raw_bytes);
  row.bits_per_byte_mean = bpb_mean / double(ds.frames.size());
  row.ratio = compression_ratio(row.bits_per_byte);
  row.bpp = double(bits) / double(ds.pixels);
  if (codec.lossless) {
    row.psnr = kPsnrInf;
    row.ms_ssim = 1.0;
  } else {
    row.psnr = psnr_from_mse(double(sse) / double(samples));
    if (ssim_n > 0) row.ms_ssim = ssim_sum / double(ssim_n);
  }

  maybe_time(
      row, ds, [&](const TactileFrame& f) { codec.encode(f, job.quality); },
      [&](size_t i) { codec.decode(encodings[i]); }, job.serial_timing);
  row.wall_s = seconds_since(start);
  return row;
}

BenchResult run_external_job(const JobContext& job) {
  const LoadedDataset& ds = *job.dataset;
  BenchResult row;
  row.codec_id = job.spec->id;
  row.dataset = ds.name;
  row.quality = job.quality;
  row.frames = ds.frames.size();

  const auto start = Clock::now();
  TempDir dir;
  uint64_t bits = 0;
  uint64_t sse = 0;
  uint64_t samples = 0;
  double bpb_mean = 0.0;
  double ssim_sum = 0.0;
  size_t ssim_n = 0;
  std::vector<fs::path> compressed(ds.files.size());

  for (size_t i = 0; i < ds.files.size(); ++i) {
    const fs::path in = ds.files[i];
    const fs::path enc = dir.path / ("c" + std::to_string(i) + ".bin");
    run_command(substitute(job.spec->encode_cmd, in.string(), enc.string(), job.quality));
    if (!fs::exists(enc)) {
      fail(Err::kExternalCommandFailure, "encoder produced no output: " + enc.string());
    }
    compressed[i] = enc;
    const uint64_t enc_bits = uint64_t(fs::file_size(enc)) * 8;
    bits += enc_bits;
    bpb_mean += double(enc_bits) / double(ds.frames[i].raw_bytes());

    fs::path dec = dir.path / ("d" + std::to_string(i) + in.extension().string());
    run_command(substitute(job.spec->decode_cmd, enc.string(), dec.string(), job.quality));
    if (!fs::exists(dec)) {
      fail(Err::kExternalCommandFailure, "decoder produced no output: " + dec.string());
    }
    if (job.spec->is_lossless()) {
      if (read_file(dec) != read_file(in)) {
        row.status = "lossless_violation";
        return row;
      }
    } else {
      const TactileFrame recon = load_frame(dec);
      const TactileFrame& f = ds.frames[i];
      if (!recon.same_dims(f)) {
        fail(Err::kExternalCommandFailure, "decoder changed frame dimensions");
      }
      sse += kernels::active_kernels().sse_u8(f.pixels.data(), recon.pixels.data(),
                                              f.pixels.size());
      samples += f.sample_count();
      try {
        ssim_sum += ms_ssim(f, recon);
        ++ssim_n;
      } catch (const Error& e) {
        if (e.code() != Err::kTooSmallForAnyScale) throw;
      }
    }
  }

  row.bits_per_byte = double(bits) / double(ds.raw_bytes);
  row.bits_per_byte_mean = bpb_mean / double(ds.frames.size());
  row.ratio = compression_ratio(row.bits_per_byte);
  row.bpp = double(bits) / double(ds.pixels);
  if (job.spec->is_lossless()) {
    row.psnr = kPsnrInf;
    row.ms_ssim = 1.0;
  } else {
    row.psnr = psnr_from_mse(double(sse) / double(samples));
    if (ssim_n > 0) row.ms_ssim = ssim_sum / double(ssim_n);
  }

  maybe_time(
      row, ds,
      [&](const TactileFrame& f) {
        const size_t i = size_t(&f - ds.frames.data());
        const fs::path enc = dir.path / "t.bin";
        run_command(substitute(job.spec->encode_cmd, ds.files[i].string(), enc.string(),
                               job.quality));
      },
      [&](size_t i) {
        const fs::path dec = dir.path / ("t" + compressed[i].extension().string());
        run_command(substitute(job.spec->decode_cmd, compressed[i].string(), dec.string(),
                               job.quality));
      },
      job.serial_timing);
  row.wall_s = seconds_since(start);
  return row;
}

void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn) {
  const int workers = std::max(1, std::min<int>(threads, int(n)));
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(size_t(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

CodecRegistry::CodecRegistry() {
  specs_.push_back({kCodecStore, CodecKind::kBuiltinLossless, "", "", {kQualityTokenLossless}});
  specs_.push_back(
      {kCodecLosslessLite, CodecKind::kBuiltinLossless, "", "", {kQualityTokenLossless}});
  specs_.push_back({kCodecLossyLite, CodecKind::kBuiltinLossy, "", "", {"0", "1", "2", "3"}});
}

void CodecRegistry::register_external(const CodecSpec& spec) {
  if (!spec.is_external()) {
    fail(Err::kMalformedTemplate, "register_external requires an external codec kind");
  }
  if (contains(spec.id)) fail(Err::kMalformedTemplate, "duplicate codec id: " + spec.id);
  for (const std::string& tmpl : {spec.encode_cmd, spec.decode_cmd}) {
    if (!has_placeholder(tmpl, "{in}") || !has_placeholder(tmpl, "{out}")) {
      fail(Err::kMalformedTemplate,
           "codec " + spec.id + ": command template needs {in} and {out}");
    }
  }
  CodecSpec stored = spec;
  if (stored.qualities.empty()) {
    stored.qualities = stored.is_lossless() ? std::vector<std::string>{kQualityTokenLossless}
                                            : std::vector<std::string>{"default"};
  }
  specs_.push_back(std::move(stored));
}

const CodecSpec& CodecRegistry::get(const std::string& id) const {
  for (const CodecSpec& s : specs_) {
    if (s.id == id) return s;
  }
  fail(Err::kUnknownCodec, "codec not registered: " + id);
}

bool CodecRegistry::contains(const std::string& id) const {
  for (const CodecSpec& s : specs_) {
    if (s.id == id) return true;
  }
  return false;
}

std::vector<std::string> CodecRegistry::ids() const {
  std::vector<std::string> out;
  for (const CodecSpec& s : specs_) out.push_back(s.id);
  return out;
}

CodecTiming time_codec(const std::vector<TactileFrame>& frames,
                       const std::function<void(const TactileFrame&)>& encode_one,
                       const std::function<void(size_t)>& decode_one) {
  constexpr size_t kWarmup = 2;
  constexpr int kRuns = 3;
  if (frames.size() < 10) fail(Err::kTooFewFrames, "timing needs at least 10 frames");

  uint64_t timed_bytes = 0;
  for (size_t i = kWarmup; i < frames.size(); ++i) timed_bytes += frames[i].raw_bytes();
  const double timed_frames = double(frames.size() - kWarmup);

  auto median_of = [](std::array<double, kRuns>& walls) {
    std::sort(walls.begin(), walls.end());
    return walls[kRuns / 2];
  };

  for (size_t i = 0; i < kWarmup; ++i) encode_one(frames[i]);
  std::array<double, kRuns> enc_walls{};
  for (int r = 0; r < kRuns; ++r) {
    const auto t0 = Clock::now();
    for (size_t i = kWarmup; i < frames.size(); ++i) encode_one(frames[i]);
    enc_walls[r] = std::max(seconds_since(t0), 1e-9);
  }

  for (size_t i = 0; i < kWarmup; ++i) decode_one(i);
  std::array<double, kRuns> dec_walls{};
  for (int r = 0; r < kRuns; ++r) {
    const auto t0 = Clock::now();
    for (size_t i = kWarmup; i < frames.size(); ++i) decode_one(i);
    dec_walls[r] = std::max(seconds_since(t0), 1e-9);
  }

  const double enc_wall = median_of(enc_walls);
  const double dec_wall = median_of(dec_walls);
  CodecTiming t;
  t.enc_kbps = double(timed_bytes) / 1024.0 / enc_wall;
  t.dec_kbps = double(timed_bytes) / 1024.0 / dec_wall;
  t.enc_fps = timed_frames / enc_wall;
  t.dec_fps = timed_frames / dec_wall;
  return t;
}

BenchConfig bench_config_from_table(const ConfigTable& table, const fs::path& base_dir) {
  BenchConfig config;
  auto it = table.find("datasets");
  if (it == table.end()) fail(Err::kConfigError, "config: missing 'datasets'");
  for (const ConfigValue& v : it->second.as_array()) {
    fs::path p = v.as_string();
    if (p.is_relative()) p = base_dir / p;
    config.datasets.push_back(p);
  }

  it = table.find("codecs");
  if (it == table.end()) fail(Err::kConfigError, "config: missing 'codecs'");
  for (const ConfigValue& v : it->second.as_array()) {
    if (v.is_string()) {
      config.codecs.push_back(v.as_string());
      continue;
    }
    const ConfigTable& t = v.as_table();
    CodecSpec spec;
    auto get = [&](const char* key) -> const ConfigValue& {
      auto f = t.find(key);
      if (f == t.end()) fail(Err::kConfigError, std::string("external codec: missing ") + key);
      return f->second;
    };
    spec.id = get("id").as_string();
    const std::string kind = get("kind").as_string();
    if (kind == "external-lossless") {
      spec.kind = CodecKind::kExternalLossless;
    } else if (kind == "external-lossy") {
      spec.kind = CodecKind::kExternalLossy;
    } else {
      fail(Err::kConfigError, "external codec kind must be external-lossless|external-lossy");
    }
    spec.encode_cmd = get("encode").as_string();
    spec.decode_cmd = get("decode").as_string();
    if (auto q = t.find("qualities"); q != t.end()) {
      for (const ConfigValue& qv : q->second.as_array()) spec.qualities.push_back(qv.as_string());
    }
    config.registry.register_external(spec);
    config.codecs.push_back(spec.id);
  }

  if (auto f = table.find("threads"); f != table.end()) config.threads = int(f->second.as_int());
  if (auto f = table.find("serial_timing"); f != table.end()) {
    config.serial_timing = f->second.as_bool();
  }
  if (auto f = table.find("out"); f != table.end()) {
    fs::path p = f->second.as_string();
    config.out_dir = p.is_relative() ? base_dir / p : p;
  }
  return config;
}

std::vector<BenchResult> run_benchmark(const BenchConfig& config) {
  // Resolve everything up front; unknown codecs and missing datasets are
  // whole-run errors, not row failures.
  std::vector<const CodecSpec*> specs;
  for (const std::string& id : config.codecs) specs.push_back(&config.registry.get(id));

  std::vector<LoadedDataset> datasets;
  datasets.reserve(config.datasets.size());
  for (const fs::path& p : config.datasets) datasets.push_back(load_dataset(p));

  std::vector<JobContext> jobs;
  for (const CodecSpec* spec : specs) {
    for (const LoadedDataset& ds : datasets) {
      for (const std::string& quality : spec->qualities) {
        jobs.push_back({spec, &ds, quality, config.serial_timing});
      }
    }
  }

  std::vector<BenchResult> rows(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](size_t i) {
    const JobContext& job = jobs[i];
    try {
      rows[i] = job.spec->is_external() ? run_external_job(job) : run_builtin_job(job);
    } catch (const Error& e) {
      rows[i] = BenchResult{};
      rows[i].codec_id = job.spec->id;
      rows[i].dataset = job.dataset->name;
      rows[i].quality = job.quality;
      rows[i].frames = job.dataset->frames.size();
      rows[i].status = std::string("error: ") + e.what();
    } catch (const std::exception& e) {
      rows[i] = BenchResult{};
      rows[i].codec_id = job.spec->id;
      rows[i].dataset = job.dataset->name;
      rows[i].quality = job.quality;
      rows[i].status = std::string("error: ") + e.what();
    }
  });

  std::sort(rows.begin(), rows.end(), [](const BenchResult& a, const BenchResult& b) {
    return std::tie(a.codec_id, a.dataset, a.quality) < std::tie(b.codec_id, b.dataset, b.quality);
  });
  return rows;
}

std::string results_to_csv(const std::vector<BenchResult>& results) {
  std::ostringstream out;
  out << "codec,dataset,quality,bits_per_byte,ratio,bpp,psnr_db,ms_ssim,enc_kbps,dec_kbps,"
         "enc_fps,dec_fps,frames,wall_s,status\n";
  for (const BenchResult& r : results) {
    out << r.codec_id << "," << r.dataset << "," << r.quality << ",";
    if (r.ok()) {
      out << fmt_double(r.bits_per_byte) << "," << fmt_double(r.ratio) << ","
          << fmt_double(r.bpp) << ",";
      out << (std::isinf(r.psnr) ? "inf" : fmt_double(r.psnr)) << ",";
      out << (r.ms_ssim ? fmt_double(*r.ms_ssim) : "") << ",";
    } else {
      out << ",,,,,";
    }
    if (r.timing) {
      out << fmt_double(r.timing->enc_kbps) << "," << fmt_double(r.timing->dec_kbps) << ","
          << fmt_double(r.timing->enc_fps) << "," << fmt_double(r.timing->dec_fps) << ",";
    } else {
      out << ",,,,";
    }
    out << r.frames << "," << fmt_double(r.wall_s) << "," << r.status << "\n";
  }
  return out.str();
}

namespace {

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": cannot open for writing");
  out << text;
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": write failed");
}

}  // namespace

void emit_report(const std::vector<BenchResult>& results, const fs::path& out_dir) {
  if (results.empty()) fail(Err::kEmptyInput, "emit_report: no results");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(Err::kUnwritableOutput, out_dir.string() + ": " + ec.message());

  write_text_file(out_dir / "results.csv", results_to_csv(results));

  // group rows by dataset
  std::map<std::string, std::vector<const BenchResult*>> by_dataset;
  for (const BenchResult& r : results) by_dataset[r.dataset].push_back(&r);

  std::ostringstream md;
  md << "# Compression benchmark report\n";
  for (const auto& [dataset, rows] : by_dataset) {
    std::vector<const BenchResult*> lossless, lossy;
    for (const BenchResult* r : rows) {
      (r->quality == kQualityTokenLossless ? lossless : lossy).push_back(r);
    }

    md << "\n## " << dataset << "\n";
    if (!lossless.empty()) {
      // rank by bits/Byte: best bold, second-best underlined
      std::vector<const BenchResult*> ranked;
      for (const BenchResult* r : lossless) {
        if (r->ok()) ranked.push_back(r);
      }
      std::sort(ranked.begin(), ranked.end(), [](const BenchResult* a, const BenchResult* b) {
        return a->bits_per_byte < b->bits_per_byte;
      });
      md << "\n### Lossless\n\n"
         << "| codec | bits/Byte | per-frame mean | ratio | enc KB/s | dec KB/s | enc fps | "
            "dec fps | status |\n"
         << "|---|---|---|---|---|---|---|---|---|\n";
      for (const BenchResult* r : lossless) {
        std::string bpb = r->ok() ? fmt_double(r->bits_per_byte) : "";
        std::string ratio = r->ok() ? fmt_double(r->ratio) + "x" : "";
        if (!ranked.empty() && r == ranked[0]) {
          bpb = "**" + bpb + "**";
        } else if (ranked.size() > 1 && r == ranked[1]) {
          bpb = "_" + bpb + "_";
        }
        md << "| " << r->codec_id << " | " << bpb << " | "
           << (r->ok() ? fmt_double(r->bits_per_byte_mean) : "") << " | " << ratio << " | ";
        if (r->timing) {
          md << fmt_double(r->timing->enc_kbps) << " | " << fmt_double(r->timing->dec_kbps)
             << " | " << fmt_double(r->timing->enc_fps) << " | "
             << fmt_double(r->timing->dec_fps) << " | ";
        } else {
          md << " | | | | ";
        }
        md << r->status << " |\n";
      }
    }

    if (!lossy.empty()) {
      // best bpp per quality token
      std::map<std::string, const BenchResult*> best;
      for (const BenchResult* r : lossy) {
        if (!r->ok()) continue;
        auto [it, inserted] = best.emplace(r->quality, r);
        if (!inserted && r->bpp < it->second->bpp) it->second = r;
      }
      md << "\n### Lossy\n\n"
         << "| codec | quality | bpp | PSNR (dB) | MS-SSIM | enc fps | dec fps | status |\n"
         << "|---|---|---|---|---|---|---|---|\n";
      for (const BenchResult* r : lossy) {
        std::string bpp = r->ok() ? fmt_double(r->bpp) : "";
        auto it = best.find(r->quality);
        if (r->ok() && it != best.end() && it->second == r) bpp = "**" + bpp + "**";
        md << "| " << r->codec_id << " | " << r->quality << " | " << bpp << " | "
           << (r->ok() ? (std::isinf(r->psnr) ? std::string("inf") : fmt_double(r->psnr)) : "")
           << " | " << (r->ok() && r->ms_ssim ? fmt_double(*r->ms_ssim) : "") << " | ";
        if (r->timing) {
          md << fmt_double(r->timing->enc_fps) << " | " << fmt_double(r->timing->dec_fps)
             << " | ";
        } else {
          md << " | | ";
        }
        md << r->status << " |\n";
      }

      // RD plot: one polyline per codec with >= 2 finite points
      std::map<std::string, SvgSeries> series_map;
      for (const BenchResult* r : lossy) {
        if (!r->ok() || std::isinf(r->psnr)) continue;
        SvgSeries& s = series_map[r->codec_id];
        s.label = r->codec_id;
        s.points.emplace_back(r->bpp, r->psnr);
      }
      std::vector<SvgSeries> series;
      for (auto& [id, s] : series_map) {
        if (s.points.size() < 2) continue;
        std::sort(s.points.begin(), s.points.end());
        series.push_back(std::move(s));
      }
      if (!series.empty()) {
        const std::string plot_name = "rd_" + dataset + ".svg";
        write_line_plot(out_dir / plot_name, "RD curve: " + dataset, "bpp (log)", "PSNR (dB)",
                        series, /*log_x=*/true);
        md << "\n![RD curve](" << plot_name << ")\n";
      }
    }
  }
  write_text_file(out_dir / "report.md", md.str());
}

std::pair<TactileFrame, uint64_t> external_roundtrip(const CodecSpec& spec,
                                                     const TactileFrame& frame,
                                                     const std::string& quality) {
  if (!spec.is_external()) fail(Err::kUnknownCodec, "external_roundtrip needs an external codec");
  TempDir dir;
  const fs::path in = dir.path / "in.ppm";
  const fs::path enc = dir.path / "enc.bin";
  const fs::path dec = dir.path / "dec.ppm";
  save_ppm(frame, in);
  run_command(substitute(spec.encode_cmd, in.string(), enc.string(), quality));
  if (!fs::exists(enc)) fail(Err::kExternalCommandFailure, "encoder produced no output");
  run_command(substitute(spec.decode_cmd, enc.string(), dec.string(), quality));
  if (!fs::exists(dec)) fail(Err::kExternalCommandFailure, "decoder produced no output");
  TactileFrame recon = load_frame(dec);
  recon.sensor_kind = frame.sensor_kind;
  recon.mapping = frame.mapping;
  return {std::move(recon), fs::file_size(enc)};
}

RdCurve load_rd_curve_csv(const fs::path& path, const std::string& label) {
  std::ifstream in(path);
  if (!in) fail(Err::kUnreadableFile, path.string() + ": cannot open");
  std::string line;
  if (!std::getline(in, line)) fail(Err::kUnsupportedFormat, path.string() + ": empty CSV");
  const std::vector<std::string> header = csv_fields(line);

  auto column = [&](const std::string& name) -> int {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return int(i);
    }
    return -1;
  };
  const int bpp_col = column("bpp");
  const int psnr_col = column("psnr_db");
  const int ssim_col = column("ms_ssim");
  const int status_col = column("status");
  if (bpp_col < 0 || psnr_col < 0) {
    fail(Err::kUnsupportedFormat, path.string() + ": need bpp and psnr_db columns");
  }

  RdCurve curve;
  curve.label = label;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = csv_fields(line);
    if (int(f.size()) <= std::max(bpp_col, psnr_col)) continue;
    if (status_col >= 0 && int(f.size()) > status_col && f[status_col] != "ok") continue;
    if (f[bpp_col].empty() || f[psnr_col].empty() || f[psnr_col] == "inf") continue;
    RdPoint p;
    p.bpp = std::stod(f[bpp_col]);
    p.psnr = std::stod(f[psnr_col]);
    if (ssim_col >= 0 && int(f.size()) > ssim_col && !f[ssim_col].empty()) {
      p.ms_ssim = std::stod(f[ssim_col]);
    }
    curve.points.push_back(p);
  }
  std::sort(curve.points.begin(), curve.points.end(),
            [](const RdPoint& a, const RdPoint& b) { return a.bpp < b.bpp; });
  return curve;
}

}  // namespace taco
