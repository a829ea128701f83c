#include "taco/downstream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "taco/svg.hpp"

namespace taco {

FeatureVector extract_features(const TactileFrame& frame) {
  frame.validate();
  constexpr uint32_t kGrid = 16;
  FeatureVector fv;
  fv.values.resize(kFeatureDim);

  for (uint32_t ty = 0; ty < kGrid; ++ty) {
    const uint32_t y0 = std::min(ty * frame.height / kGrid, frame.height - 1);
    const uint32_t y1 = std::max(y0 + 1, (ty + 1) * frame.height / kGrid);
    for (uint32_t tx = 0; tx < kGrid; ++tx) {
      const uint32_t x0 = std::min(tx * frame.width / kGrid, frame.width - 1);
      const uint32_t x1 = std::max(x0 + 1, (tx + 1) * frame.width / kGrid);
      double sum[3] = {0.0, 0.0, 0.0};
      for (uint32_t y = y0; y < y1; ++y) {
        for (uint32_t x = x0; x < x1; ++x) {
          for (uint32_t c = 0; c < kChannels; ++c) sum[c] += double(frame.at(x, y, c));
        }
      }
      const double cell = double(x1 - x0) * double(y1 - y0) * 255.0;
      for (uint32_t c = 0; c < kChannels; ++c) {
        fv.values[(size_t(ty) * kGrid + tx) * kChannels + c] = sum[c] / cell;
      }
    }
  }
  return fv;
}

namespace {

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return s;
}

}  // namespace

int knn_classify(std::span<const FeatureVector> train, const FeatureVector& query, size_t k) {
  if (train.empty()) fail(Err::kEmptyTrainSet, "knn: empty training set");
  if (k < 1 || k > train.size()) fail(Err::kNonPositiveInput, "knn: k must be in [1, |train|]");

  std::vector<std::pair<double, int>> neighbors;  // (squared distance, label)
  neighbors.reserve(train.size());
  for (const FeatureVector& t : train) neighbors.emplace_back(squared_distance(t, query), t.label);
  std::sort(neighbors.begin(), neighbors.end());

  std::map<int, std::pair<size_t, double>> votes;  // label -> (count, distance sum)
  for (size_t i = 0; i < k; ++i) {
    auto& v = votes[neighbors[i].second];
    v.first += 1;
    v.second += std::sqrt(neighbors[i].first);
  }

  int best_label = -1;
  size_t best_count = 0;
  double best_mean = 0.0;
  for (const auto& [label, v] : votes) {
    const double mean = v.second / double(v.first);
    if (v.first > best_count || (v.first == best_count && mean < best_mean)) {
      best_label = label;
      best_count = v.first;
      best_mean = mean;
    }
    // equal count and equal mean falls through: map order keeps lowest label
  }
  return best_label;
}

void LinearClassifier::fit(std::span<const FeatureVector> train, double ridge) {
  if (train.empty()) fail(Err::kEmptyTrainSet, "linear: empty training set");
  const size_t dim = train[0].values.size() + 1;  // bias column

  std::set<int> label_set;
  for (const FeatureVector& t : train) label_set.insert(t.label);
  classes_.assign(label_set.begin(), label_set.end());

  // normal equations: A = X^T X + ridge I, shared across the one-vs-rest heads
  std::vector<double> a(dim * dim, 0.0);
  for (const FeatureVector& t : train) {
    for (size_t i = 0; i < dim; ++i) {
      const double xi = i < dim - 1 ? t.values[i] : 1.0;
      for (size_t j = i; j < dim; ++j) {
        a[i * dim + j] += xi * (j < dim - 1 ? t.values[j] : 1.0);
      }
    }
  }
  for (size_t i = 0; i < dim; ++i) a[i * dim + i] += ridge;

  // in-place Cholesky (upper triangle was filled)
  std::vector<double> chol(dim * dim, 0.0);
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = i; j < dim; ++j) {
      double s = a[i * dim + j];
      for (size_t p = 0; p < i; ++p) s -= chol[p * dim + i] * chol[p * dim + j];
      if (i == j) {
        if (s <= 0.0) fail(Err::kSingularSystem, "linear: normal equations not positive definite");
        chol[i * dim + i] = std::sqrt(s);
      } else {
        chol[i * dim + j] = s / chol[i * dim + i];
      }
    }
  }

  auto solve = [&](std::vector<double>& b) {
    for (size_t i = 0; i < dim; ++i) {  // forward, L = chol^T
      double s = b[i];
      for (size_t p = 0; p < i; ++p) s -= chol[p * dim + i] * b[p];
      b[i] = s / chol[i * dim + i];
    }
    for (size_t ii = dim; ii-- > 0;) {  // backward, U = chol
      double s = b[ii];
      for (size_t j = ii + 1; j < dim; ++j) s -= chol[ii * dim + j] * b[j];
      b[ii] = s / chol[ii * dim + ii];
    }
  };

  weights_.clear();
  for (int cls : classes_) {
    std::vector<double> rhs(dim, 0.0);
    for (const FeatureVector& t : train) {
      const double y = t.label == cls ? 1.0 : 0.0;
      if (y == 0.0) continue;
      for (size_t i = 0; i < dim - 1; ++i) rhs[i] += t.values[i];
      rhs[dim - 1] += 1.0;
    }
    solve(rhs);
    weights_.push_back(std::move(rhs));
  }
}

int LinearClassifier::predict(const FeatureVector& query) const {
  if (weights_.empty()) fail(Err::kEmptyTrainSet, "linear: classifier not fitted");
  int best = classes_[0];
  double best_score = -1e300;
  for (size_t c = 0; c < classes_.size(); ++c) {
    const std::vector<double>& w = weights_[c];
    double s = w.back();
    for (size_t i = 0; i + 1 < w.size(); ++i) s += w[i] * query.values[i];
    if (s > best_score) {  // strict: ties keep the lower class id
      best_score = s;
      best = classes_[c];
    }
  }
  return best;
}

int linear_classify(std::span<const FeatureVector> train, const FeatureVector& query) {
  LinearClassifier clf;
  clf.fit(train);
  return clf.predict(query);
}

namespace {

double evaluate_top1(std::span<const FeatureVector> train, std::span<const FeatureVector> test,
                     Classifier classifier, size_t k) {
  if (test.empty()) fail(Err::kEmptyInput, "no test examples");
  size_t hits = 0;
  if (classifier == Classifier::kKnn) {
    const size_t kk = std::min(k, train.size());
    for (const FeatureVector& q : test) hits += knn_classify(train, q, kk) == q.label;
  } else {
    LinearClassifier clf;
    clf.fit(train);
    for (const FeatureVector& q : test) hits += clf.predict(q) == q.label;
  }
  return double(hits) / double(test.size());
}

}  // namespace

std::vector<AccuracyPoint> accuracy_under_compression(
    const DatasetManifest& manifest, const std::vector<TactileFrame>& frames,
    const CodecSpec& codec, std::span<const std::string> qualities, Classifier classifier,
    size_t k) {
  if (manifest.entries.size() != frames.size()) {
    fail(Err::kDimensionMismatch, "manifest entries and frames differ in count");
  }

  std::set<std::string> labels;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.label.empty()) fail(Err::kUnlabeledManifest, "manifest entry lacks a label: " + e.path);
    if (e.split == Split::kUnassigned) {
      fail(Err::kUnsplitManifest, "manifest entry lacks a split: " + e.path);
    }
    labels.insert(e.label);
  }
  std::map<std::string, int> class_of;
  int next_class = 0;
  for (const std::string& l : labels) class_of[l] = next_class++;

  auto split_features = [&](const std::vector<FeatureVector>& all) {
    std::pair<std::vector<FeatureVector>, std::vector<FeatureVector>> out;
    for (size_t i = 0; i < all.size(); ++i) {
      (manifest.entries[i].split == Split::kTrain ? out.first : out.second).push_back(all[i]);
    }
    if (out.first.empty()) fail(Err::kEmptyTrainSet, "train split is empty");
    return out;
  };

  auto features_of = [&](const std::vector<TactileFrame>& fs) {
    std::vector<FeatureVector> out;
    out.reserve(fs.size());
    for (size_t i = 0; i < fs.size(); ++i) {
      FeatureVector fv = extract_features(fs[i]);
      fv.label = class_of[manifest.entries[i].label];
      out.push_back(std::move(fv));
    }
    return out;
  };

  std::vector<AccuracyPoint> points;

  {  // uncompressed baseline at exactly 24 bpp
    const auto all = features_of(frames);
    const auto [train, test] = split_features(all);
    points.push_back({"uncompressed", 24.0, evaluate_top1(train, test, classifier, k), classifier});
  }

  const bool builtin = !codec.is_external();
  for (const std::string& quality : qualities) {
    uint64_t bits = 0;
    uint64_t pixels = 0;
    std::vector<TactileFrame> recon;
    recon.reserve(frames.size());
    for (const TactileFrame& f : frames) {
      if (builtin) {
        const BuiltinCodec bc = BuiltinCodec::get(codec.id);
        const std::vector<uint8_t> enc = bc.encode(f, quality);
        bits += uint64_t(enc.size()) * 8;
        recon.push_back(bc.decode(enc));
      } else {
        auto [r, b] = external_roundtrip(codec, f, quality);
        bits += b * 8;
        recon.push_back(std::move(r));
      }
      pixels += uint64_t(f.width) * f.height;
    }
    const auto all = features_of(recon);
    const auto [train, test] = split_features(all);
    points.push_back({quality, double(bits) / double(pixels),
                      evaluate_top1(train, test, classifier, k), classifier});
  }
  return points;
}

void emit_accuracy_report(const std::vector<AccuracyPoint>& points, const std::string& codec_id,
                          const std::string& dataset, const std::filesystem::path& out_dir) {
  if (points.empty()) fail(Err::kEmptyInput, "emit_accuracy_report: no points");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(Err::kUnwritableOutput, out_dir.string() + ": " + ec.message());

  std::ofstream csv(out_dir / "accuracy.csv", std::ios::binary);
  if (!csv) fail(Err::kUnwritableOutput, "cannot write accuracy.csv");
  csv << "codec,quality,bpp,classifier,top1\n";
  char buf[64];
  for (const AccuracyPoint& p : points) {
    std::snprintf(buf, sizeof(buf), "%.6g,%s,%.6g", p.bpp,
                  p.classifier == Classifier::kKnn ? "knn" : "linear", p.top1);
    csv << codec_id << "," << p.quality << "," << buf << "\n";
  }
  csv.close();

  std::map<std::string, SvgSeries> series_map;
  for (const AccuracyPoint& p : points) {
    const std::string key = p.classifier == Classifier::kKnn ? "knn" : "linear";
    SvgSeries& s = series_map[key];
    s.label = codec_id + " (" + key + ")";
    s.points.emplace_back(p.bpp, p.top1);
  }
  std::vector<SvgSeries> series;
  for (auto& [key, s] : series_map) {
    std::sort(s.points.begin(), s.points.end());
    series.push_back(std::move(s));
  }
  write_line_plot(out_dir / ("accuracy_" + dataset + ".svg"), "Accuracy vs rate: " + dataset,
                  "bpp (log)", "top-1 accuracy", series, /*log_x=*/true);
}

}  // namespace taco
