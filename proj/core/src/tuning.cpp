#include "vmwe/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "vmwe/cart.hpp"
#include "vmwe/error.hpp"
#include "vmwe/evaluation.hpp"

namespace vmwe {

nlohmann::json CvResult::to_json() const {
  nlohmann::json folds_json = nlohmann::json::array();
  for (const auto& f : folds)
    folds_json.push_back({{"precision", f.precision},
                          {"recall", f.recall},
                          {"f1", f.f1},
                          {"train_size", f.train_size},
                          {"test_size", f.test_size},
                          {"degenerate", f.degenerate}});
  return {{"mean_precision", mean_precision},
          {"mean_recall", mean_recall},
          {"mean_f1", mean_f1},
          {"sigma", sigma},
          {"degenerate_folds", degenerate_folds},
          {"folds", std::move(folds_json)}};
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t folds, std::uint64_t seed, bool shuffle) {
  if (folds < 2) throw ValidationError("cross-validation needs at least two folds");
  if (n < folds) throw ValidationError("fewer candidates (" + std::to_string(n) + ") than folds");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i + 1 < n; ++i) std::swap(order[i], order[i + uniform_index(rng, n - i)]);
  }
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = n / folds + (f < n % folds ? 1 : 0);
    out[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos), order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return out;
}

CvResult cross_validate(std::span<const FeatureVector> vectors, const std::vector<bool>& labels,
                        const std::vector<std::string>& selected, ClassifierKind kind,
                        const std::vector<std::vector<std::size_t>>& folds, const TrainConfig& config) {
  if (labels.size() != vectors.size()) throw ValidationError("label count does not match candidates");
  CvResult result;
  std::vector<char> in_test(vectors.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::fill(in_test.begin(), in_test.end(), 0);
    for (auto i : folds[f]) in_test.at(i) = 1;
    std::vector<FeatureVector> train_x;
    std::vector<bool> train_y;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (in_test[i]) continue;
      train_x.push_back(vectors[i]);
      train_y.push_back(labels[i]);
    }
    auto [matrix, dict] = encode(train_x, &selected);
    const auto model = train(kind, matrix, dict, train_y, config);

    std::vector<bool> predicted, gold;
    for (auto i : folds[f]) {
      predicted.push_back(model.predict(dict.encode(vectors[i]), dict.fingerprint()).label);
      gold.push_back(labels[i]);
    }
    const auto report = evaluate_candidates(predicted, gold);
    FoldScore score{report.precision, report.recall, report.f1, train_x.size(), folds[f].size(),
                    model.constant_label.has_value()};
    if (score.degenerate) ++result.degenerate_folds;
    result.folds.push_back(score);
  }
  const double k = static_cast<double>(result.folds.size());
  for (const auto& f : result.folds) {
    result.mean_precision += f.precision / k;
    result.mean_recall += f.recall / k;
    result.mean_f1 += f.f1 / k;
  }
  double var = 0.0;
  for (const auto& f : result.folds) var += (f.f1 - result.mean_f1) * (f.f1 - result.mean_f1) / k;
  result.sigma = std::sqrt(var);
  return result;
}

CvResult cross_validate(std::span<const FeatureVector> vectors, const std::vector<bool>& labels,
                        const std::vector<std::string>& selected, ClassifierKind kind, const CvOptions& options) {
  const auto folds = make_folds(vectors.size(), options.folds, options.seed, options.shuffle);
  return cross_validate(vectors, labels, selected, kind, folds, options.train);
}

nlohmann::json TuningResult::to_json() const {
  nlohmann::json curve_json = nlohmann::json::array();
  for (const auto& p : curve) {
    auto j = p.result.to_json();
    j["k"] = p.k;
    curve_json.push_back(std::move(j));
  }
  return {{"format", "vmwe-tuning"},
          {"method", to_string(method)},
          {"classifier", to_string(classifier)},
          {"best_k", best_k},
          {"selected_features", selected_features},
          {"mean_precision", mean_precision},
          {"mean_recall", mean_recall},
          {"mean_f1", mean_f1},
          {"sigma", sigma},
          {"curve", std::move(curve_json)}};
}

TuningResult TuningResult::from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "vmwe-tuning") throw ValidationError("not a tuning file");
    TuningResult r;
    r.method = parse_ranking_method(j.at("method").get<std::string>());
    r.classifier = parse_classifier(j.at("classifier").get<std::string>());
    j.at("best_k").get_to(r.best_k);
    j.at("selected_features").get_to(r.selected_features);
    j.at("mean_precision").get_to(r.mean_precision);
    j.at("mean_recall").get_to(r.mean_recall);
    j.at("mean_f1").get_to(r.mean_f1);
    j.at("sigma").get_to(r.sigma);
    for (const auto& p : j.at("curve")) {
      TuningPoint point;
      p.at("k").get_to(point.k);
      p.at("mean_precision").get_to(point.result.mean_precision);
      p.at("mean_recall").get_to(point.result.mean_recall);
      p.at("mean_f1").get_to(point.result.mean_f1);
      p.at("sigma").get_to(point.result.sigma);
      p.at("degenerate_folds").get_to(point.result.degenerate_folds);
      for (const auto& f : p.at("folds"))
        point.result.folds.push_back({f.at("precision").get<double>(), f.at("recall").get<double>(),
                                      f.at("f1").get<double>(), f.at("train_size").get<std::size_t>(),
                                      f.at("test_size").get<std::size_t>(), f.at("degenerate").get<bool>()});
      r.curve.push_back(std::move(point));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed tuning result: ") + e.what());
  }
}

TuningResult greedy_tune(const FeatureRanking& ranking, std::span<const FeatureVector> vectors,
                         const std::vector<bool>& labels, ClassifierKind kind, const CvOptions& options,
                         std::size_t jobs) {
  if (ranking.entries.empty()) throw ValidationError("cannot tune on an empty ranking");
  const auto folds = make_folds(vectors.size(), options.folds, options.seed, options.shuffle);
  const std::size_t length = ranking.entries.size();

  std::vector<TuningPoint> curve(length);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < length; i = next++) {
      try {
        curve[i].k = i + 1;
        curve[i].result = cross_validate(vectors, labels, ranking.top(i + 1), kind, folds, options.train);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = length;
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, length);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  TuningResult r;
  r.method = ranking.method;
  r.classifier = kind;
  std::size_t best = 0;
  for (std::size_t i = 1; i < length; ++i)
    if (curve[i].result.mean_f1 > curve[best].result.mean_f1) best = i;
  r.best_k = best + 1;
  r.selected_features = ranking.top(r.best_k);
  r.mean_precision = curve[best].result.mean_precision;
  r.mean_recall = curve[best].result.mean_recall;
  r.mean_f1 = curve[best].result.mean_f1;
  r.sigma = curve[best].result.sigma;
  r.curve = std::move(curve);
  return r;
}

}  // namespace vmwe
