// Acceptance suite: prints one line per criterion and exits nonzero if any
// fail. Criterion 12 drives the installed CLI binary (path in argv[1]).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "taco/bench.hpp"
#include "taco/downstream.hpp"
#include "taco/kernels.hpp"
#include "test_util.hpp"

using namespace taco;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int index, bool pass, const std::string& what, double seconds) {
  std::printf("[%s] %2d  %s  (%.2fs)\n", pass ? "PASS" : "FAIL", index, what.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename Fn>
void criterion(int index, const std::string& what, Fn&& fn) {
  const auto t0 = Clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail = e.what();
    pass = false;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(index, pass, what + (detail.empty() ? "" : " [" + detail + "]"), secs);
}

bool roundtrip_ok(const TactileFrame& frame) {
  const TactileFrame back = decode_lossless(encode_lossless(frame));
  return back.width == frame.width && back.height == frame.height &&
         back.pixels == frame.pixels;
}

std::vector<double> uniform256() { return std::vector<double>(256, 1.0 / 256.0); }

std::vector<double> skewed256() {
  std::vector<double> p(256, 0.1 / 255.0);
  p[0] = 0.9;
  return p;
}

std::vector<uint8_t> sample_iid(const std::vector<double>& probs, size_t n, uint64_t seed) {
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  SplitMix64 rng(seed);
  std::vector<uint8_t> out(n);
  for (size_t i = 0; i < n; ++i) {
    const double u = rng.next_unit() * cdf.back();
    out[i] = uint8_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  }
  return out;
}

std::filesystem::path write_dataset(const std::filesystem::path& dir, const std::string& name,
                                    const std::vector<TactileFrame>& frames) {
  std::filesystem::create_directories(dir / name);
  DatasetManifest m;
  m.name = name;
  for (size_t i = 0; i < frames.size(); ++i) {
    const std::string rel = name + "/f" + std::to_string(i) + ".ppm";
    save_ppm(frames[i], dir / rel);
    ManifestEntry e;
    e.path = rel;
    e.label = "l";
    e.trajectory_id = "t" + std::to_string(i);
    m.entries.push_back(e);
  }
  const auto path = dir / (name + ".json");
  save_manifest(m, path);
  return path;
}

TactileFrame class_frame(int cls, uint64_t seed) {
  SplitMix64 rng(seed);
  TactileFrame f(32, 32);
  for (uint32_t y = 0; y < 32; ++y) {
    for (uint32_t x = 0; x < 32; ++x) {
      int base[3];
      if (cls == 0) {
        base[0] = 40;
        base[1] = 60;
        base[2] = 200;
      } else if (cls == 1) {
        base[0] = 200;
        base[1] = 50;
        base[2] = 40;
      } else {
        const bool on = ((x / 4) + (y / 4)) % 2 == 0;
        base[0] = base[1] = base[2] = on ? 220 : 20;
      }
      for (int c = 0; c < 3; ++c) {
        f.at(x, y, uint32_t(c)) =
            uint8_t(std::clamp(base[c] + int(rng.next_below(9)) - 4, 0, 255));
      }
    }
  }
  return f;
}

std::vector<std::string> csv_row_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion(1, "lossless round trip over 10^4 frames spanning all dataset resolutions",
            [](std::string& detail) {
              struct Spec {
                uint32_t w, h;
                int count;
              };
              const Spec plan[] = {{5, 12, 3000},   {16, 16, 3000},  {48, 32, 2000},
                                   {120, 160, 1600}, {240, 320, 300}, {640, 480, 96}};
              SplitMix64 rng(404);
              size_t frames = 0;
              for (const Spec& s : plan) {
                for (int i = 0; i < s.count; ++i) {
                  if (!roundtrip_ok(tt::noise_frame(s.w, s.h, rng.next()))) {
                    detail = "mismatch at " + std::to_string(s.w) + "x" + std::to_string(s.h);
                    return false;
                  }
                  ++frames;
                }
              }
              for (const auto& [name, frame] : tt::all_fixtures()) {
                if (!roundtrip_ok(frame)) {
                  detail = "fixture " + name;
                  return false;
                }
                ++frames;
              }
              detail = std::to_string(frames) + " frames bit-exact";
              return frames >= 10000;
            });

  criterion(2, "entropy coding within 0.02 bits/symbol of the Shannon oracle",
            [](std::string& detail) {
              const auto uni = uniform256();
              const auto u_sym = sample_iid(uni, 100000, 3);
              ProbabilityModel um = ProbabilityModel::static_order0(uni);
              const double u_bps = double(encode_symbols(u_sym, um).bit_len) / 1e5;

              const auto skew = skewed256();
              double h = 0.0;
              for (double p : skew) {
                if (p > 0) h -= p * std::log2(p);
              }
              const auto s_sym = sample_iid(skew, 100000, 14);
              ProbabilityModel sm = ProbabilityModel::static_order0(skew);
              const double s_bps = double(encode_symbols(s_sym, sm).bit_len) / 1e5;

              char buf[96];
              std::snprintf(buf, sizeof(buf), "uniform %.4f bps, skewed %.4f vs H %.4f", u_bps,
                            s_bps, h);
              detail = buf;
              return std::abs(u_bps - 8.0) <= 0.01 && std::abs(s_bps - h) <= 0.02;
            });

  criterion(3, "bits/Byte definition: identity codec at 8 + header; ratio = 8/bpb",
            [](std::string& detail) {
              const TactileFrame frame = tt::texture_frame(64, 64, 1);
              const std::vector<uint8_t> bytes = encode_store(frame);
              const double bpb = double(bytes.size()) * 8.0 / double(frame.raw_bytes());
              const double header_bits = double(bytes.size() - frame.raw_bytes()) * 8.0;

              char ratio_str[16];
              std::snprintf(ratio_str, sizeof(ratio_str), "%.0fx", compression_ratio(0.447));
              char buf[96];
              std::snprintf(buf, sizeof(buf), "store %.4f bits/Byte, 0.447 -> %s", bpb, ratio_str);
              detail = buf;
              return bpb > 8.0 && header_bits > 0.0 &&
                     bpb == 8.0 * double(bytes.size()) / double(frame.raw_bytes()) &&
                     compression_ratio(2.0) == 4.0 &&
                     std::abs(compression_ratio(0.447) - 17.897) < 0.01 &&
                     std::string(ratio_str) == "18x";
            });

  criterion(4, "ordering on correlated corpus: codec < general-purpose < raw",
            [&](std::string& detail) {
              tt::TempDir dir;
              std::vector<TactileFrame> corpus;
              for (int i = 0; i < 100; ++i) corpus.push_back(tt::smooth_frame(128, 128, 900 + i, 2));

              BenchConfig config;
              config.datasets.push_back(write_dataset(dir.path, "grad", corpus));
              CodecSpec gz;
              gz.id = "gzip";
              gz.kind = CodecKind::kExternalLossless;
              gz.encode_cmd = "gzip -9 -c {in} > {out}";
              gz.decode_cmd = "gzip -dc {in} > {out}";
              config.registry.register_external(gz);
              config.codecs = {"taco-ll-lite", "gzip"};
              const auto rows = run_benchmark(config);

              double ours = 0.0, theirs = 0.0;
              bool all_ok = true;
              for (const BenchResult& r : rows) {
                all_ok &= r.ok();
                (r.codec_id == "gzip" ? theirs : ours) = r.bits_per_byte;
              }
              char buf[96];
              std::snprintf(buf, sizeof(buf), "codec %.3f < gzip %.3f < 8.0", ours, theirs);
              detail = buf;
              return all_ok && ours < theirs && theirs < 8.0;
            });

  criterion(5, "BD-Rate oracle: self = 0.000%, 2x = +100%, 0.5x = -50%",
            [](std::string& detail) {
              RdCurve anchor;
              anchor.points = {{0.25, 30.0, {}}, {0.5, 33.5, {}}, {1.1, 37.0, {}}, {2.4, 40.5, {}}};
              RdCurve doubled = anchor, halved = anchor;
              for (auto& p : doubled.points) p.bpp *= 2.0;
              for (auto& p : halved.points) p.bpp *= 0.5;

              const double self = bd_rate(anchor, anchor);
              const double up = bd_rate(anchor, doubled);
              const double down = bd_rate(anchor, halved);
              char buf[96];
              std::snprintf(buf, sizeof(buf), "self %.6f%%, 2x %+.4f%%, 0.5x %+.4f%%", self, up,
                            down);
              detail = buf;
              return self == 0.0 && std::abs(up - 100.0) <= 0.1 && std::abs(down + 50.0) <= 0.1;
            });

  criterion(6, "bandwidth arithmetic: 0.22 bpp at 640x480x30 = 2.03 Mbps",
            [](std::string& detail) {
              const double mbps = bandwidth_mbps(0.22, 640, 480, 30.0);
              char buf[48];
              std::snprintf(buf, sizeof(buf), "%.5f Mbps", mbps);
              detail = buf;
              return std::abs(mbps - 2.03) <= 0.01;
            });

  criterion(7, "strict RD monotonicity over the lambda sweep on every fixture",
            [](std::string& detail) {
              const double expected_lambda[4] = {0.0018, 0.0067, 0.025, 0.0483};
              const auto sweep = QualityPoint::standard_sweep();
              for (int i = 0; i < 4; ++i) {
                if (sweep[size_t(i)].lambda != expected_lambda[i]) return false;
              }
              size_t checks = 0;
              for (const auto& [name, frame] : tt::textured_fixtures()) {
                double prev_bits = -1.0, prev_mse = 1e300;
                for (const QualityPoint& q : sweep) {
                  const auto enc = encode_lossy(frame, q);
                  const double m = mse(frame, decode_lossy(enc));
                  if (double(enc.size()) <= prev_bits || m >= prev_mse) {
                    detail = "violation on " + name + " at step " + std::to_string(q.step);
                    return false;
                  }
                  prev_bits = double(enc.size());
                  prev_mse = m;
                  ++checks;
                }
              }
              detail = std::to_string(checks) + " points, 0 violations";
              return true;
            });

  criterion(8, "transform numerics: DCT 1e-9, YCoCg-R bit-exact, Parseval 1e-6",
            [](std::string& detail) {
              const auto& k = kernels::active_kernels();
              SplitMix64 rng(8);
              double in[64], coef[64], back[64];
              double max_rt = 0.0, max_parseval = 0.0;
              for (int trial = 0; trial < 10000; ++trial) {
                for (int i = 0; i < 64; ++i) in[i] = rng.next_unit() * 600.0 - 300.0;
                k.dct8x8_forward(in, coef);
                k.dct8x8_inverse(coef, back);
                double e_pix = 0.0, e_coef = 0.0;
                for (int i = 0; i < 64; ++i) {
                  max_rt = std::max(max_rt, std::abs(back[i] - in[i]));
                  e_pix += in[i] * in[i];
                  e_coef += coef[i] * coef[i];
                }
                max_parseval = std::max(max_parseval, std::abs(e_coef - e_pix) / e_pix);
              }

              bool ycocg_exact = true;
              const size_t n = 1u << 20;
              std::vector<uint8_t> rgb(n * 3), out(n * 3);
              std::vector<int16_t> y(n), co(n), cg(n);
              for (auto& v : rgb) v = uint8_t(rng.next_below(256));
              k.ycocgr_forward(rgb.data(), y.data(), co.data(), cg.data(), n);
              k.ycocgr_inverse(y.data(), co.data(), cg.data(), out.data(), n);
              ycocg_exact = out == rgb;

              char buf[96];
              std::snprintf(buf, sizeof(buf), "rt %.2e, parseval %.2e, ycocg %s", max_rt,
                            max_parseval, ycocg_exact ? "exact" : "BROKEN");
              detail = buf;
              return max_rt <= 1e-9 && max_parseval <= 1e-6 && ycocg_exact;
            });

  criterion(9, "force mapping: T x 60 stacking, exact level grid, error <= scale/2",
            [](std::string& detail) {
              const TactileFrame stacked = tt::force_fixture(60, 200);
              if (stacked.width != 60 || stacked.height != 200) return false;

              ForceImageMapping mapping;
              mapping.scale = {0.013, 2.75, 1.0 / 3.0};
              mapping.offset = {128.0, 17.5, 200.25};
              for (int axis = 0; axis < 3; ++axis) {
                for (int level = 0; level < 256; ++level) {
                  if (mapping.quantize(mapping.dequantize(uint8_t(level), axis), axis) != level) {
                    detail = "grid mismatch axis " + std::to_string(axis);
                    return false;
                  }
                }
              }

              SplitMix64 rng(9);
              for (int trial = 0; trial < 1000; ++trial) {
                ForceSequence seq(1 + rng.next_below(4));
                ForceImageMapping m;
                m.scale = {0.01 + rng.next_unit(), 0.01 + rng.next_unit(), 0.01 + rng.next_unit()};
                m.offset = {rng.next_unit() * 255.0, rng.next_unit() * 255.0,
                            rng.next_unit() * 255.0};
                const size_t taxels = 1 + rng.next_below(6);
                for (size_t t = 0; t < seq.size(); ++t) {
                  seq[t].timestamp = double(t);
                  seq[t].forces.resize(taxels);
                  for (size_t n = 0; n < taxels; ++n) {
                    for (int a = 0; a < 3; ++a) {
                      const double lo = m.dequantize(0, a), hi = m.dequantize(255, a);
                      seq[t].forces[n][a] = lo + rng.next_unit() * (hi - lo);
                    }
                  }
                }
                const TactileFrame f = force_to_frame(seq, m);
                const ForceSequence back = frame_to_force(f, m);
                for (size_t t = 0; t < seq.size(); ++t) {
                  for (size_t n = 0; n < taxels; ++n) {
                    for (int a = 0; a < 3; ++a) {
                      if (std::abs(back[t].forces[n][a] - seq[t].forces[n][a]) >
                          m.scale[a] / 2.0 + 1e-12) {
                        detail = "reconstruction error above scale/2";
                        return false;
                      }
                    }
                  }
                }
                if (force_to_frame(back, m).pixels != f.pixels) {
                  detail = "re-stacked frame differs";
                  return false;
                }
              }
              return true;
            });

  criterion(10, "metric identities: 0 dB, 48.13 dB, unit MS-SSIM, zero RMSE map",
            [](std::string& detail) {
              const TactileFrame black = tt::constant_frame(16, 16, 0, 0, 0);
              const TactileFrame white = tt::constant_frame(16, 16, 255, 255, 255);
              const double zero_db = psnr(black, white);

              const TactileFrame a = tt::texture_frame(64, 64, 10);
              TactileFrame off = a;
              for (auto& p : off.pixels) p = uint8_t(p < 255 ? p + 1 : p - 1);
              const double mse1 = psnr(a, off);

              const double self_ssim = ms_ssim(a, a);
              const auto map = rmse_map(a, a);
              bool map_zero = true;
              for (double v : map) map_zero &= v == 0.0;

              char buf[96];
              std::snprintf(buf, sizeof(buf), "%.2f dB, %.4f dB, ssim %.12f", zero_db, mse1,
                            self_ssim);
              detail = buf;
              return zero_db == 0.0 && std::abs(mse1 - 48.13) <= 0.01 &&
                     std::abs(self_ssim - 1.0) <= 1e-12 && map_zero;
            });

  criterion(11, "classification: 60/40 trajectory split, identity = baseline, graceful lossy",
            [](std::string& detail) {
              DatasetManifest manifest;
              manifest.name = "classes";
              std::vector<TactileFrame> frames;
              SplitMix64 rng(11);
              for (int traj = 0; traj < 10; ++traj) {
                for (int i = 0; i < 3; ++i) {
                  ManifestEntry e;
                  e.path = "t" + std::to_string(traj) + "_" + std::to_string(i);
                  e.label = "class" + std::to_string(traj % 3);
                  e.trajectory_id = "traj" + std::to_string(traj);
                  manifest.entries.push_back(e);
                  frames.push_back(class_frame(traj % 3, rng.next()));
                }
              }
              manifest = split_dataset(manifest, 0.6, 7);
              manifest.validate();
              size_t train_traj = 0;
              std::set<std::string> seen;
              for (const auto& e : manifest.entries) {
                if (e.split == Split::kTrain && seen.insert(e.trajectory_id).second) ++train_traj;
              }
              if (train_traj != 6) {
                detail = "train trajectories = " + std::to_string(train_traj);
                return false;
              }

              CodecRegistry registry;
              const std::vector<std::string> lossless_q = {"lossless"};
              const std::vector<std::string> sweep = {"0", "1", "2", "3"};
              for (Classifier c : {Classifier::kKnn, Classifier::kLinear}) {
                const auto store = accuracy_under_compression(manifest, frames,
                                                              registry.get("store"), lossless_q,
                                                              c, 3);
                if (store[0].top1 != 1.0) {
                  detail = "uncompressed baseline not perfect";
                  return false;
                }
                if (store[1].top1 != store[0].top1) {
                  detail = "identity codec deviates from baseline";
                  return false;
                }
                const auto lossy = accuracy_under_compression(manifest, frames,
                                                              registry.get("taco-l-lite"), sweep,
                                                              c, 3);
                if (lossy[4].top1 < lossy[1].top1 - 0.05) {
                  detail = "finest quality lost >0.05 accuracy vs coarsest";
                  return false;
                }
              }
              return true;
            });

  criterion(12, "bench determinism across thread counts + grid completeness",
            [&](std::string& detail) {
              if (cli.empty()) {
                detail = "cli path missing";
                return false;
              }
              tt::TempDir dir;
              std::vector<TactileFrame> a, b;
              for (int i = 0; i < 4; ++i) a.push_back(tt::texture_frame(48, 48, 70 + i));
              for (int i = 0; i < 3; ++i) b.push_back(tt::smooth_frame(32, 32, 80 + i, 2));
              const auto da = write_dataset(dir.path, "alpha", a);
              const auto db = write_dataset(dir.path, "beta", b);

              std::ofstream cfg(dir.path / "bench.toml");
              cfg << "datasets = [\"alpha.json\", \"beta.json\"]\n"
                  << "codecs = [\"store\", \"taco-ll-lite\", \"taco-l-lite\"]\n"
                  << "out = \"out1\"\n";
              cfg.close();

              auto run = [&](int threads, const std::string& out) {
                std::ostringstream cmd;
                cmd << "'" << cli << "' bench --config '" << (dir.path / "bench.toml").string()
                    << "' --out '" << (dir.path / out).string() << "' --threads " << threads
                    << " >/dev/null";
                return std::system(cmd.str().c_str());
              };
              if (run(1, "out1") != 0 || run(3, "out2") != 0) {
                detail = "bench run failed";
                return false;
              }

              std::ifstream c1(dir.path / "out1/results.csv");
              std::ifstream c2(dir.path / "out2/results.csv");
              std::string l1, l2;
              size_t rows = 0;
              bool equal = true;
              // timing columns (9..12) and wall_s (14) are exempt
              const std::set<size_t> timing_cols = {8, 9, 10, 11, 13};
              std::getline(c1, l1);
              std::getline(c2, l2);
              equal &= l1 == l2;
              while (std::getline(c1, l1) && std::getline(c2, l2)) {
                ++rows;
                const auto f1 = csv_row_fields(l1);
                const auto f2 = csv_row_fields(l2);
                if (f1.size() != f2.size()) {
                  equal = false;
                  break;
                }
                for (size_t i = 0; i < f1.size(); ++i) {
                  if (timing_cols.count(i)) continue;
                  if (f1[i] != f2[i]) {
                    detail = "column " + std::to_string(i) + ": " + f1[i] + " != " + f2[i];
                    equal = false;
                  }
                }
              }
              if (std::getline(c2, l2)) equal = false;

              // grid: 2 datasets x (1 + 1 + 4 qualities) = 12 rows, all accounted
              const size_t grid = 2 * (1 + 1 + 4);
              if (rows != grid) {
                detail = "rows " + std::to_string(rows) + " != grid " + std::to_string(grid);
                return false;
              }
              if (equal) detail = std::to_string(rows) + " rows identical";
              return equal;
            });

  std::printf("%s: %d criteria failed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
