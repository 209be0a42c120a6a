#include "vmwe/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "log.hpp"
#include "vmwe/cart.hpp"
#include "vmwe/error.hpp"
#include "vmwe/fingerprint.hpp"

namespace vmwe {
namespace {

void require_both_classes(const std::vector<bool>& labels) {
  const auto pos = std::count(labels.begin(), labels.end(), true);
  if (pos == 0 || pos == static_cast<std::ptrdiff_t>(labels.size()))
    throw ValidationError("ranking needs both classes among the labels");
}

std::string labeled_provenance(const EncodedMatrix& m, const std::vector<bool>& labels) {
  std::uint64_t h = fnv1a64(to_hex(m.dictionary_fingerprint));
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (auto c : m.rows[i]) h = fnv1a64(std::to_string(c) + ",", h);
    h = fnv1a64(labels[i] ? "+;" : "-;", h);
  }
  return "rows=" + std::to_string(m.num_rows()) + ";columns=" + std::to_string(m.num_columns) +
         ";data=" + to_hex(h);
}

std::vector<ScoredPair> drop_constant(const EncodedMatrix& m, const ColumnDictionary& dict,
                                      const std::vector<std::optional<double>>& scores, std::string_view method) {
  std::vector<ScoredPair> pairs;
  std::size_t dropped = 0;
  for (std::size_t c = 0; c < m.num_columns; ++c) {
    if (!scores[c]) {
      ++dropped;
      continue;
    }
    pairs.push_back({dict.column(c), *scores[c]});
  }
  if (dropped) detail::log().info("{}: dropped {} zero-variance column(s) before ranking", method, dropped);
  return pairs;
}

std::vector<std::size_t> column_activity(const EncodedMatrix& m) {
  std::vector<std::size_t> active(m.num_columns, 0);
  for (const auto& row : m.rows)
    for (auto c : row) ++active.at(c);
  return active;
}

}  // namespace

std::string_view to_string(RankingMethod m) {
  switch (m) {
    case RankingMethod::Freq: return "freq";
    case RankingMethod::Chi2: return "chi2";
    case RankingMethod::Gain: return "gain";
    case RankingMethod::Forest: return "forest";
  }
  return "freq";
}

RankingMethod parse_ranking_method(std::string_view s) {
  for (auto m : kRankingMethods)
    if (to_string(m) == s) return m;
  if (s == "FREQ") return RankingMethod::Freq;
  if (s == "CHI2") return RankingMethod::Chi2;
  if (s == "GAIN") return RankingMethod::Gain;
  if (s == "FOREST") return RankingMethod::Forest;
  throw ValidationError("unknown ranking method '" + std::string(s) + "' (expected freq, chi2, gain or forest)");
}

std::vector<std::string> FeatureRanking::top(std::size_t k) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(k, entries.size()); ++i) out.push_back(entries[i].feature);
  return out;
}

nlohmann::json FeatureRanking::to_json() const {
  nlohmann::json entries_json = nlohmann::json::array();
  for (const auto& e : entries) entries_json.push_back({{"feature", e.feature}, {"score", e.score}});
  return {{"format", "vmwe-ranking"},
          {"method", to_string(method)},
          {"seed", seed},
          {"provenance", provenance},
          {"entries", std::move(entries_json)}};
}

FeatureRanking FeatureRanking::from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "vmwe-ranking") throw ValidationError("not a ranking file");
    FeatureRanking r;
    r.method = parse_ranking_method(j.at("method").get<std::string>());
    j.at("seed").get_to(r.seed);
    j.at("provenance").get_to(r.provenance);
    std::set<std::string> seen;
    for (const auto& e : j.at("entries")) {
      RankingEntry entry{e.at("feature").get<std::string>(), e.at("score").get<double>()};
      if (!seen.insert(entry.feature).second) throw ValidationError("duplicate feature in ranking: " + entry.feature);
      r.entries.push_back(std::move(entry));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed ranking: ") + e.what());
  }
}

std::vector<RankingEntry> strip_values(std::vector<ScoredPair> pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const ScoredPair& a, const ScoredPair& b) {
    return a.score != b.score ? a.score > b.score : a.pair < b.pair;
  });
  std::vector<RankingEntry> out;
  std::set<std::string> seen;
  for (auto& p : pairs)
    if (seen.insert(p.pair.feature).second) out.push_back({p.pair.feature, p.score});
  return out;
}

void PairCounter::add(const FeatureVector& v) {
  ++rows_;
  for (auto& [feature, value] : activated_pairs(v)) ++counts_[Column{std::move(feature), std::move(value)}];
}

void PairCounter::add(const ColumnDictionary& dictionary, std::span<const std::uint32_t> row) {
  ++rows_;
  for (auto col : row) ++counts_[dictionary.column(col)];
}

FeatureRanking PairCounter::ranking() const {
  if (rows_ == 0) throw ValidationError("frequency ranking needs at least one candidate");
  std::vector<ScoredPair> pairs;
  pairs.reserve(counts_.size());
  std::uint64_t h = kFnvOffset;
  for (const auto& [col, n] : counts_) {
    pairs.push_back({col, static_cast<double>(n)});
    h = fnv1a64(col.feature + '\x1f' + col.value + '\x1f' + std::to_string(n) + '\x1e', h);
  }
  FeatureRanking r;
  r.method = RankingMethod::Freq;
  r.entries = strip_values(std::move(pairs));
  r.provenance = "rows=" + std::to_string(rows_) + ";pairs=" + std::to_string(counts_.size()) + ";data=" + to_hex(h);
  return r;
}

FeatureRanking rank_freq(std::span<const FeatureVector> vectors) {
  PairCounter counter;
  for (const auto& v : vectors) counter.add(v);
  return counter.ranking();
}

FeatureRanking rank_freq(const EncodedMatrix& matrix, const ColumnDictionary& dictionary) {
  if (matrix.dictionary_fingerprint != dictionary.fingerprint())
    throw ValidationError("matrix was not encoded with this dictionary");
  PairCounter counter;
  for (const auto& row : matrix.rows) counter.add(dictionary, row);
  return counter.ranking();
}

double pearson_chi2(double active_pos, double active_neg, double inactive_pos, double inactive_neg) {
  const double n = active_pos + active_neg + inactive_pos + inactive_neg;
  const double observed[2][2] = {{active_pos, active_neg}, {inactive_pos, inactive_neg}};
  const double rows[2] = {active_pos + active_neg, inactive_pos + inactive_neg};
  const double cols[2] = {active_pos + inactive_pos, active_neg + inactive_neg};
  double chi2 = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const double expected = rows[r] * cols[c] / n;
      if (expected > 0.0) chi2 += (observed[r][c] - expected) * (observed[r][c] - expected) / expected;
    }
  return chi2;
}

std::vector<std::optional<double>> chi2_scores(const EncodedMatrix& matrix, const std::vector<bool>& labels) {
  if (labels.size() != matrix.num_rows()) throw ValidationError("label count does not match matrix rows");
  require_both_classes(labels);
  std::vector<double> active_pos(matrix.num_columns, 0.0), active_neg(matrix.num_columns, 0.0);
  double pos = 0.0, neg = 0.0;
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    (labels[i] ? pos : neg) += 1.0;
    for (auto c : matrix.rows[i]) (labels[i] ? active_pos : active_neg).at(c) += 1.0;
  }
  const double n = pos + neg;
  std::vector<std::optional<double>> out(matrix.num_columns);
  for (std::size_t c = 0; c < matrix.num_columns; ++c) {
    const double active = active_pos[c] + active_neg[c];
    if (active == 0.0 || active == n) continue;
    out[c] = pearson_chi2(active_pos[c], active_neg[c], pos - active_pos[c], neg - active_neg[c]);
  }
  return out;
}

FeatureRanking rank_chi2(const EncodedMatrix& matrix, const ColumnDictionary& dictionary,
                         const std::vector<bool>& labels) {
  if (matrix.dictionary_fingerprint != dictionary.fingerprint())
    throw ValidationError("matrix was not encoded with the given dictionary");
  const auto scores = chi2_scores(matrix, labels);
  FeatureRanking r;
  r.method = RankingMethod::Chi2;
  r.entries = strip_values(drop_constant(matrix, dictionary, scores, "chi2"));
  r.provenance = labeled_provenance(matrix, labels);
  return r;
}

double entropy(double positive, double negative) {
  const double n = positive + negative;
  double h = 0.0;
  for (double x : {positive, negative})
    if (x > 0.0) h -= (x / n) * std::log2(x / n);
  return h;
}

std::map<std::string, double> gain_scores(std::span<const FeatureVector> vectors, const std::vector<bool>& labels) {
  if (labels.size() != vectors.size()) throw ValidationError("label count does not match vectors");
  require_both_classes(labels);
  std::set<std::string> features;
  for (const auto& v : vectors)
    for (const auto& [name, value] : v.values) features.insert(name);

  const double n = static_cast<double>(vectors.size());
  const double pos = static_cast<double>(std::count(labels.begin(), labels.end(), true));
  const double base = entropy(pos, n - pos);

  std::map<std::string, double> out;
  for (const auto& f : features) {
    // Partitions keyed by value; absence is its own partition.
    std::map<std::optional<std::string>, std::pair<double, double>> parts;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const auto it = vectors[i].values.find(f);
      std::optional<std::string> key;
      if (it != vectors[i].values.end()) key = value_string(it->second);
      auto& [p, q] = parts[key];
      (labels[i] ? p : q) += 1.0;
    }
    double conditional = 0.0;
    for (const auto& [key, counts] : parts)
      conditional += ((counts.first + counts.second) / n) * entropy(counts.first, counts.second);
    out[f] = std::max(0.0, base - conditional);
  }
  return out;
}

FeatureRanking rank_gain(std::span<const FeatureVector> vectors, const std::vector<bool>& labels) {
  const auto scores = gain_scores(vectors, labels);
  FeatureRanking r;
  r.method = RankingMethod::Gain;
  for (const auto& [f, g] : scores) r.entries.push_back({f, g});
  std::stable_sort(r.entries.begin(), r.entries.end(),
                   [](const RankingEntry& a, const RankingEntry& b) { return a.score > b.score; });
  std::uint64_t h = kFnvOffset;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    h = fnv1a64(features_to_json(vectors[i]).dump() + (labels[i] ? "+" : "-"), h);
  r.provenance = "rows=" + std::to_string(vectors.size()) + ";data=" + to_hex(h);
  return r;
}

std::vector<double> forest_importances(const EncodedMatrix& matrix, const std::vector<bool>& labels,
                                       const ForestOptions& options) {
  if (options.trees < 1) throw ValidationError("a forest needs at least one tree");
  if (labels.size() != matrix.num_rows()) throw ValidationError("label count does not match matrix rows");
  require_both_classes(labels);

  // Canonical row order makes the bootstrap independent of input order.
  std::vector<std::size_t> order(matrix.num_rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return matrix.rows[a] != matrix.rows[b] ? matrix.rows[a] < matrix.rows[b] : labels[a] < labels[b];
  });
  EncodedMatrix canonical;
  canonical.dictionary_fingerprint = matrix.dictionary_fingerprint;
  canonical.num_columns = matrix.num_columns;
  std::vector<bool> ys;
  for (auto i : order) {
    canonical.rows.push_back(matrix.rows[i]);
    ys.push_back(labels[i]);
  }

  const std::size_t d = matrix.num_columns;
  CartOptions cart;
  if (!options.all_features)
    cart.max_features = options.max_features
                            ? options.max_features
                            : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d)))));

  std::vector<double> total(d, 0.0);
  std::size_t contributing = 0;
  const std::size_t n = canonical.num_rows();
  for (std::size_t t = 0; t < options.trees; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    std::vector<double> weights;
    if (options.bootstrap) {
      weights.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) weights[uniform_index(rng, n)] += 1.0;
    }
    const auto tree = CartTree::fit(canonical, ys, weights, cart, &rng);
    auto imp = tree.impurity_decrease();
    const double sum = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (sum <= 0.0) continue;
    ++contributing;
    for (std::size_t c = 0; c < d; ++c) total[c] += imp[c] / sum;
  }
  const double sum = std::accumulate(total.begin(), total.end(), 0.0);
  if (contributing > 0 && sum > 0.0)
    for (auto& v : total) v /= sum;
  return total;
}

FeatureRanking rank_forest(const EncodedMatrix& matrix, const ColumnDictionary& dictionary,
                           const std::vector<bool>& labels, const ForestOptions& options) {
  if (matrix.dictionary_fingerprint != dictionary.fingerprint())
    throw ValidationError("matrix was not encoded with the given dictionary");
  const auto importances = forest_importances(matrix, labels, options);
  const auto active = column_activity(matrix);
  std::vector<std::optional<double>> scores(matrix.num_columns);
  for (std::size_t c = 0; c < matrix.num_columns; ++c)
    if (active[c] > 0 && active[c] < matrix.num_rows()) scores[c] = importances[c];
  FeatureRanking r;
  r.method = RankingMethod::Forest;
  r.seed = options.seed;
  r.entries = strip_values(drop_constant(matrix, dictionary, scores, "forest"));
  r.provenance = labeled_provenance(matrix, labels) + ";trees=" + std::to_string(options.trees);
  return r;
}

}  // namespace vmwe
