#pragma once

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "vmwe/classifiers.hpp"
#include "vmwe/features.hpp"
#include "vmwe/ranking.hpp"

namespace vmwe {

struct FoldScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  bool degenerate = false;  // training split had a single class
};

struct CvResult {
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f1 = 0.0;
  double sigma = 0.0;  // population standard deviation of fold F-scores
  std::vector<FoldScore> folds;
  std::size_t degenerate_folds = 0;

  nlohmann::json to_json() const;
};

struct CvOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  /// Shuffle once before slicing; false keeps corpus order.
  bool shuffle = true;
  TrainConfig train;
};

/// Row indices of each fold: one shuffle, then contiguous near-equal slices
/// (the first n % folds slices get one extra row).
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t folds, std::uint64_t seed, bool shuffle);

/// Unstratified k-fold estimate of positive-class P/R/F. The column
/// dictionary is rebuilt from each training split.
CvResult cross_validate(std::span<const FeatureVector> vectors, const std::vector<bool>& labels,
                        const std::vector<std::string>& selected, ClassifierKind kind, const CvOptions& options);

/// Same, on precomputed folds.
CvResult cross_validate(std::span<const FeatureVector> vectors, const std::vector<bool>& labels,
                        const std::vector<std::string>& selected, ClassifierKind kind,
                        const std::vector<std::vector<std::size_t>>& folds, const TrainConfig& config);

struct TuningPoint {
  std::size_t k = 0;
  CvResult result;
};

struct TuningResult {
  RankingMethod method = RankingMethod::Freq;
  ClassifierKind classifier = ClassifierKind::LinearSvm;
  std::size_t best_k = 0;
  std::vector<std::string> selected_features;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f1 = 0.0;
  double sigma = 0.0;
  std::vector<TuningPoint> curve;

  nlohmann::json to_json() const;
  static TuningResult from_json(const nlohmann::json& j);
};

/// Evaluates every prefix length 1..|ranking| on identical folds and keeps
/// the best mean F (smallest k on ties). `jobs` > 1 evaluates prefixes on a
/// worker pool; results do not depend on it.
TuningResult greedy_tune(const FeatureRanking& ranking, std::span<const FeatureVector> vectors,
                         const std::vector<bool>& labels, ClassifierKind kind, const CvOptions& options,
                         std::size_t jobs = 1);

}  // namespace vmwe
