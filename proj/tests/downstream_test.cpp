#include <fstream>

#include "doctest.h"
#include "taco/downstream.hpp"
#include "test_util.hpp"

using namespace taco;

namespace {

FeatureVector fv(std::vector<double> values, int label) {
  FeatureVector f;
  f.values = std::move(values);
  f.label = label;
  return f;
}

// Three well-separated texture classes (margin far above the noise floor).
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
        base[0] = on ? 220 : 20;
        base[1] = on ? 220 : 20;
        base[2] = on ? 220 : 20;
      }
      for (int c = 0; c < 3; ++c) {
        const int noise = int(rng.next_below(9)) - 4;
        f.at(x, y, uint32_t(c)) = uint8_t(std::clamp(base[c] + noise, 0, 255));
      }
    }
  }
  return f;
}

struct LabeledSet {
  DatasetManifest manifest;
  std::vector<TactileFrame> frames;
};

// 10 trajectories x 3 frames, labels cycling over 3 classes, split 60/40 at
// the trajectory level.
LabeledSet labeled_set() {
  LabeledSet out;
  out.manifest.name = "synthetic-classes";
  SplitMix64 rng(123);
  for (int traj = 0; traj < 10; ++traj) {
    const int cls = traj % 3;
    for (int i = 0; i < 3; ++i) {
      ManifestEntry e;
      e.path = "t" + std::to_string(traj) + "_" + std::to_string(i) + ".ppm";
      e.label = "class" + std::to_string(cls);
      e.trajectory_id = "traj" + std::to_string(traj);
      out.manifest.entries.push_back(e);
      out.frames.push_back(class_frame(cls, rng.next()));
    }
  }
  out.manifest = split_dataset(out.manifest, 0.6, 7);
  return out;
}

}  // namespace

TEST_CASE("features of a constant frame are value/255") {
  const FeatureVector f = extract_features(tt::constant_frame(40, 30, 51, 51, 51));
  REQUIRE(f.values.size() == kFeatureDim);
  for (double v : f.values) CHECK(v == doctest::Approx(51.0 / 255.0).epsilon(1e-12));
}

TEST_CASE("16x16 input features are the identity downsample") {
  const TactileFrame frame = tt::noise_frame(16, 16, 3);
  const FeatureVector f = extract_features(frame);
  for (uint32_t y = 0; y < 16; ++y) {
    for (uint32_t x = 0; x < 16; ++x) {
      for (uint32_t c = 0; c < 3; ++c) {
        CHECK(f.values[(y * 16 + x) * 3 + c] ==
              doctest::Approx(frame.at(x, y, c) / 255.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("32x32 with 2x2 cells of (0,0,255,255) averages to one half") {
  TactileFrame frame(32, 32);
  for (uint32_t y = 0; y < 32; ++y) {
    for (uint32_t x = 0; x < 32; ++x) {
      const uint8_t v = (y % 2 == 0) ? 0 : 255;  // each 2x2 cell: 0,0,255,255
      for (uint32_t c = 0; c < 3; ++c) frame.at(x, y, c) = v;
    }
  }
  const FeatureVector f = extract_features(frame);
  for (double v : f.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tiny frames upsample without crashing") {
  const FeatureVector f = extract_features(tt::noise_frame(5, 12, 9));
  CHECK(f.values.size() == kFeatureDim);
}

TEST_CASE("knn basics") {
  const std::vector<FeatureVector> train = {
      fv({0.0, 0.0}, 0), fv({0.1, 0.0}, 0), fv({1.0, 1.0}, 1), fv({0.9, 1.0}, 1), fv({1.0, 0.9}, 1),
  };
  // query equal to a training point, k=1
  CHECK(knn_classify(train, fv({0.1, 0.0}, -1), 1) == 0);
  // k = |train|: global majority wins
  CHECK(knn_classify(train, fv({0.0, 0.0}, -1), train.size()) == 1);

  try {
    knn_classify({}, fv({0.0}, -1), 1);
    FAIL("expected EmptyTrainSet");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kEmptyTrainSet);
  }
  CHECK_THROWS_AS(knn_classify(train, fv({0.0, 0.0}, -1), 0), Error);
  CHECK_THROWS_AS(knn_classify(train, fv({0.0, 0.0}, -1), 6), Error);
}

TEST_CASE("knn separates two distant clusters perfectly") {
  SplitMix64 rng(5);
  std::vector<FeatureVector> train;
  std::vector<FeatureVector> test;
  for (int i = 0; i < 30; ++i) {
    const int cls = i % 2;
    const double cx = cls == 0 ? 0.0 : 100.0;
    auto point = fv({cx + rng.next_unit(), cx + rng.next_unit()}, cls);
    (i < 20 ? train : test).push_back(point);
  }
  for (const FeatureVector& q : test) CHECK(knn_classify(train, q, 3) == q.label);
}

TEST_CASE("knn is invariant to training-set order") {
  SplitMix64 rng(6);
  std::vector<FeatureVector> train;
  for (int i = 0; i < 12; ++i) {
    // deliberate distance ties: points on a grid
    train.push_back(fv({double(i % 3), double(i / 3)}, i % 4));
  }
  std::vector<FeatureVector> reversed(train.rbegin(), train.rend());
  for (int i = 0; i < 20; ++i) {
    const FeatureVector q = fv({rng.next_unit() * 3.0, rng.next_unit() * 4.0}, -1);
    for (size_t k : {size_t(1), size_t(3), size_t(5)}) {
      REQUIRE(knn_classify(train, q, k) == knn_classify(reversed, q, k));
    }
  }
  // exact tie in distance and votes: k=2 between two equidistant points
  const std::vector<FeatureVector> pair = {fv({1.0, 0.0}, 1), fv({-1.0, 0.0}, 0)};
  const std::vector<FeatureVector> swapped = {pair[1], pair[0]};
  CHECK(knn_classify(pair, fv({0.0, 0.0}, -1), 2) ==
        knn_classify(swapped, fv({0.0, 0.0}, -1), 2));
  CHECK(knn_classify(pair, fv({0.0, 0.0}, -1), 2) == 0);  // lowest class id wins
}

TEST_CASE("linear classifier puts the 1-D boundary at zero") {
  const std::vector<FeatureVector> train = {fv({-1.0}, 0), fv({1.0}, 1)};
  CHECK(linear_classify(train, fv({-0.01}, -1)) == 0);
  CHECK(linear_classify(train, fv({0.01}, -1)) == 1);
  CHECK(linear_classify(train, fv({-5.0}, -1)) == 0);
  CHECK(linear_classify(train, fv({5.0}, -1)) == 1);
}

TEST_CASE("linear classifier is exact on a separable synthetic set") {
  SplitMix64 rng(7);
  std::vector<FeatureVector> train;
  for (int i = 0; i < 60; ++i) {
    const int cls = i % 3;
    std::vector<double> x(4);
    for (auto& v : x) v = rng.next_unit() * 0.1;
    x[size_t(cls)] += 10.0;  // margin 100x the noise
    train.push_back(fv(std::move(x), cls));
  }
  LinearClassifier clf;
  clf.fit(train);
  for (const FeatureVector& t : train) CHECK(clf.predict(t) == t.label);
}

TEST_CASE("ridge makes duplicated feature columns harmless") {
  SplitMix64 rng(8);
  std::vector<FeatureVector> base;
  std::vector<FeatureVector> doubled;
  for (int i = 0; i < 40; ++i) {
    const int cls = i % 2;
    const double a = double(cls) * 4.0 + rng.next_unit();
    const double b = rng.next_unit();
    base.push_back(fv({a, b}, cls));
    doubled.push_back(fv({a, b, a}, cls));  // exact duplicate of column 0
  }
  LinearClassifier c1, c2;
  c1.fit(base);
  c2.fit(doubled);
  for (int i = 0; i < 20; ++i) {
    const double a = rng.next_unit() * 5.0;
    const double b = rng.next_unit();
    CHECK(c1.predict(fv({a, b}, -1)) == c2.predict(fv({a, b, a}, -1)));
  }
  // without ridge the duplicated column is singular
  LinearClassifier c3;
  try {
    c3.fit(doubled, 0.0);
    FAIL("expected SingularSystem");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kSingularSystem);
  }
}

TEST_CASE("accuracy under compression: baseline, identity codec, degradation") {
  const LabeledSet set = labeled_set();
  CodecRegistry registry;

  for (Classifier classifier : {Classifier::kKnn, Classifier::kLinear}) {
    // identity codec: accuracy equals the uncompressed baseline exactly
    const std::vector<std::string> lossless_q = {"lossless"};
    const auto store_points = accuracy_under_compression(
        set.manifest, set.frames, registry.get("store"), lossless_q, classifier, 3);
    REQUIRE(store_points.size() == 2);
    CHECK(store_points[0].quality == "uncompressed");
    CHECK(store_points[0].bpp == 24.0);
    CHECK(store_points[0].top1 == 1.0);  // separable set: perfect on raw data
    CHECK(store_points[1].top1 == store_points[0].top1);
    CHECK(store_points[1].bpp > 24.0);  // container overhead is visible

    // full lossy sweep: finest quality within 0.05 of the coarsest or better,
    // and still perfect on this well-separated corpus
    const std::vector<std::string> sweep = {"0", "1", "2", "3"};
    const auto lossy_points = accuracy_under_compression(
        set.manifest, set.frames, registry.get("taco-l-lite"), sweep, classifier, 3);
    REQUIRE(lossy_points.size() == 5);
    const double coarse = lossy_points[1].top1;
    const double fine = lossy_points[4].top1;
    CHECK(fine >= coarse - 0.05);
    CHECK(fine == 1.0);
    for (size_t i = 2; i < lossy_points.size(); ++i) {
      CHECK(lossy_points[i].bpp > lossy_points[i - 1].bpp);
    }
  }
}

TEST_CASE("manifest validation for classification") {
  LabeledSet set = labeled_set();
  CodecRegistry registry;
  const std::vector<std::string> q = {"lossless"};

  LabeledSet unlabeled = set;
  unlabeled.manifest.entries[4].label.clear();
  try {
    accuracy_under_compression(unlabeled.manifest, unlabeled.frames, registry.get("store"), q,
                               Classifier::kKnn, 3);
    FAIL("expected UnlabeledManifest");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kUnlabeledManifest);
  }

  LabeledSet unsplit = set;
  for (auto& e : unsplit.manifest.entries) e.split = Split::kUnassigned;
  try {
    accuracy_under_compression(unsplit.manifest, unsplit.frames, registry.get("store"), q,
                               Classifier::kKnn, 3);
    FAIL("expected UnsplitManifest");
  } catch (const Error& e) {
    CHECK(e.code() == Err::kUnsplitManifest);
  }
}

TEST_CASE("accuracy report emits csv and svg") {
  tt::TempDir dir;
  std::vector<AccuracyPoint> points = {
      {"uncompressed", 24.0, 1.0, Classifier::kKnn},
      {"0", 0.4, 0.9, Classifier::kKnn},
      {"3", 1.2, 1.0, Classifier::kKnn},
  };
  emit_accuracy_report(points, "taco-l-lite", "synthetic", dir.path);
  REQUIRE(std::filesystem::exists(dir.path / "accuracy.csv"));
  REQUIRE(std::filesystem::exists(dir.path / "accuracy_synthetic.svg"));

  std::ifstream csv(dir.path / "accuracy.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "codec,quality,bpp,classifier,top1");
  std::getline(csv, line);
  CHECK(line == "taco-l-lite,uncompressed,24,knn,1");
}
