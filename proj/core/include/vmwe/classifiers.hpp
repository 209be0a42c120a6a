#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vmwe/cart.hpp"
#include "vmwe/features.hpp"

namespace vmwe {

enum class ClassifierKind { NaiveBayes, LinearSvm, DecisionTree };

std::string_view to_string(ClassifierKind k);
/// Accepts "nb", "svm", "tree" and the full names.
ClassifierKind parse_classifier(std::string_view s);

struct SvmConfig {
  double c = 1.0;
  double tolerance = 1e-4;  // relative duality gap
  int max_epochs = 5000;
  std::uint64_t seed = 42;  // visiting order within epochs
};

struct TrainConfig {
  SvmConfig svm;
  double nb_alpha = 1.0;
};

/// Objective values recorded once per SVM epoch.
struct TrainingTrace {
  std::vector<double> dual_objective;  // minimized form, non-increasing
  std::vector<double> primal_objective;
  int epochs = 0;
  bool converged = false;
};

/// Multivariate Bernoulli parameters; index 0 is the negative class.
struct NaiveBayesParams {
  std::array<double, 2> log_prior{};
  std::vector<std::array<double, 2>> log_active;    // log P(x_j = 1 | class)
  std::vector<std::array<double, 2>> log_inactive;  // log P(x_j = 0 | class)
};

struct SvmParams {
  std::vector<double> weights;
  double bias = 0.0;
};

struct TreeParams {
  CartTree tree;
};

/// NB margins this close to zero count as ties (predicted negative).
inline constexpr double kNaiveBayesTie = 1e-12;

struct Prediction {
  bool label = false;
  double score = 0.0;
};

struct Model {
  static constexpr int kFormatVersion = 1;

  ClassifierKind kind = ClassifierKind::LinearSvm;
  ColumnDictionary dictionary;
  std::vector<std::string> selected_features;
  std::string fingerprint;
  /// Set when training saw a single class; prediction returns it.
  std::optional<bool> constant_label;
  std::variant<NaiveBayesParams, SvmParams, TreeParams> params;

  /// Throws ValidationError when the row was encoded with another dictionary.
  Prediction predict(std::span<const std::uint32_t> row, std::uint64_t dictionary_fingerprint) const;
  Prediction predict(const FeatureVector& v) const;

  nlohmann::json to_json() const;
  static Model from_json(const nlohmann::json& j);
};

/// Trains on an encoded matrix. A single-class training set produces a
/// constant model (with a logged warning) rather than an error.
Model train(ClassifierKind kind, const EncodedMatrix& matrix, const ColumnDictionary& dictionary,
            const std::vector<bool>& labels, const TrainConfig& config = {}, TrainingTrace* trace = nullptr);

/// Individual learners, exposed for tests and benchmarks.
NaiveBayesParams train_naive_bayes(const EncodedMatrix& m, const std::vector<bool>& labels, double alpha);
SvmParams train_linear_svm(const EncodedMatrix& m, const std::vector<bool>& labels, const SvmConfig& config,
                           TrainingTrace* trace = nullptr);

/// Log-posterior margin log P(+|x) - log P(-|x).
double naive_bayes_margin(const NaiveBayesParams& p, std::span<const std::uint32_t> row);
double svm_margin(const SvmParams& p, std::span<const std::uint32_t> row);

}  // namespace vmwe
