#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmwe/features.hpp"

namespace vmwe {

enum class RankingMethod { Freq, Chi2, Gain, Forest };

inline constexpr RankingMethod kRankingMethods[] = {RankingMethod::Freq, RankingMethod::Chi2,
                                                    RankingMethod::Gain, RankingMethod::Forest};

std::string_view to_string(RankingMethod m);
RankingMethod parse_ranking_method(std::string_view s);

struct RankingEntry {
  std::string feature;
  double score = 0.0;

  bool operator==(const RankingEntry&) const = default;
};

/// Features by decreasing score; equal scores in lexicographic order.
struct FeatureRanking {
  RankingMethod method = RankingMethod::Freq;
  std::vector<RankingEntry> entries;
  std::uint64_t seed = 0;
  std::string provenance;

  std::size_t size() const noexcept { return entries.size(); }
  /// Feature names of the first k entries.
  std::vector<std::string> top(std::size_t k) const;

  nlohmann::json to_json() const;
  static FeatureRanking from_json(const nlohmann::json& j);
};

struct ScoredPair {
  Column pair;
  double score = 0.0;
};

/// Orders pairs by decreasing score and keeps, for each feature, its
/// best-ranked pair.
std::vector<RankingEntry> strip_values(std::vector<ScoredPair> pairs);

/// Streaming frequency counter over activated (feature, value) pairs.
class PairCounter {
 public:
  void add(const FeatureVector& v);
  /// A row of a binary matrix; its active columns are the activated pairs.
  void add(const ColumnDictionary& dictionary, std::span<const std::uint32_t> row);
  std::size_t rows() const noexcept { return rows_; }
  const std::map<Column, std::size_t>& counts() const noexcept { return counts_; }
  /// Throws ValidationError when nothing was counted.
  FeatureRanking ranking() const;

 private:
  std::map<Column, std::size_t> counts_;
  std::size_t rows_ = 0;
};

/// Labels are not needed: candidates may come from an unannotated corpus.
FeatureRanking rank_freq(std::span<const FeatureVector> vectors);
/// Same counts from an encoded matrix.
FeatureRanking rank_freq(const EncodedMatrix& matrix, const ColumnDictionary& dictionary);

/// Pearson statistic (no continuity correction) of the 2x2 table
/// [[active & positive, active & negative], [inactive & positive, inactive & negative]].
double pearson_chi2(double active_pos, double active_neg, double inactive_pos, double inactive_neg);

/// Per-column statistic; nullopt for columns that are constant over the rows.
std::vector<std::optional<double>> chi2_scores(const EncodedMatrix& matrix, const std::vector<bool>& labels);

FeatureRanking rank_chi2(const EncodedMatrix& matrix, const ColumnDictionary& dictionary,
                         const std::vector<bool>& labels);

/// Binary entropy in bits.
double entropy(double positive, double negative);

/// Information gain of every feature over its raw values; an absent feature
/// forms its own partition.
std::map<std::string, double> gain_scores(std::span<const FeatureVector> vectors, const std::vector<bool>& labels);

FeatureRanking rank_gain(std::span<const FeatureVector> vectors, const std::vector<bool>& labels);

struct ForestOptions {
  std::size_t trees = 10;
  std::uint64_t seed = 42;
  bool bootstrap = true;
  /// Columns examined per split; 0 means floor(sqrt(columns)).
  std::size_t max_features = 0;
  /// Examine every column at every split (overrides max_features).
  bool all_features = false;
};

/// Mean over trees of per-tree normalized Gini importance, renormalized to
/// sum to one. Rows are put in canonical order before bootstrapping so the
/// result does not depend on input order.
std::vector<double> forest_importances(const EncodedMatrix& matrix, const std::vector<bool>& labels,
                                       const ForestOptions& options);

FeatureRanking rank_forest(const EncodedMatrix& matrix, const ColumnDictionary& dictionary,
                           const std::vector<bool>& labels, const ForestOptions& options = {});

}  // namespace vmwe
