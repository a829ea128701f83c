#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "taco/bench.hpp"
#include "taco/manifest.hpp"

namespace taco {

// Classifier input: the frame box-resampled to 16x16 per channel, flattened
// channel-interleaved and scaled to [0,1].
struct FeatureVector {
  std::vector<double> values;
  int label = -1;
};

inline constexpr size_t kFeatureDim = 16 * 16 * 3;

FeatureVector extract_features(const TactileFrame& frame);

// Majority vote among the k Euclidean-nearest neighbors. Distance ties at
// the selection boundary break toward the lower label, and vote ties break
// by smaller mean distance then lower class id, so the result does not
// depend on training-set order.
int knn_classify(std::span<const FeatureVector> train, const FeatureVector& query, size_t k);

// One-vs-rest least squares on (features, bias), ridge epsilon 1e-6;
// prediction is the argmax score with ties to the lower class id.
class LinearClassifier {
 public:
  void fit(std::span<const FeatureVector> train, double ridge = 1e-6);
  int predict(const FeatureVector& query) const;

 private:
  std::vector<std::vector<double>> weights_;  // per class, dim+1 with bias
  std::vector<int> classes_;
};

int linear_classify(std::span<const FeatureVector> train, const FeatureVector& query);

enum class Classifier : uint8_t { kKnn, kLinear };

struct AccuracyPoint {
  std::string quality;  // "uncompressed" for the baseline row
  double bpp = 0.0;
  double top1 = 0.0;
  Classifier classifier = Classifier::kKnn;
};

// Compresses and reconstructs every frame (train and test alike) at each
// quality, fits on the train split, and reports test top-1 plus the mean
// bpp; an uncompressed baseline point at 24 bpp comes first. The manifest
// must carry labels and an assigned trajectory-level split.
std::vector<AccuracyPoint> accuracy_under_compression(
    const DatasetManifest& manifest, const std::vector<TactileFrame>& frames,
    const CodecSpec& codec, std::span<const std::string> qualities, Classifier classifier,
    size_t k = 5);

// accuracy.csv (codec,quality,bpp,classifier,top1) and a bpp-accuracy SVG.
void emit_accuracy_report(const std::vector<AccuracyPoint>& points, const std::string& codec_id,
                          const std::string& dataset, const std::filesystem::path& out_dir);

}  // namespace taco
