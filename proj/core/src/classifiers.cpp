#include "vmwe/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "log.hpp"
#include "vmwe/error.hpp"
#include "vmwe/fingerprint.hpp"

namespace vmwe {
namespace {

void check_shapes(const EncodedMatrix& m, const std::vector<bool>& labels) {
  if (labels.size() != m.num_rows()) throw ValidationError("label count does not match matrix rows");
  for (const auto& row : m.rows)
    for (auto c : row)
      if (c >= m.num_columns) throw ValidationError("encoded column out of range");
}

double dot(const std::vector<double>& w, std::span<const std::uint32_t> row) {
  double s = 0.0;
  for (auto c : row)
    if (c < w.size()) s += w[c];
  return s;
}

double half_norm(const SvmParams& p) {
  double s = p.bias * p.bias;
  for (double v : p.weights) s += v * v;
  return 0.5 * s;
}

std::string training_fingerprint(ClassifierKind kind, const EncodedMatrix& m, const std::vector<bool>& labels,
                                 const TrainConfig& config) {
  std::uint64_t h = fnv1a64(to_string(kind));
  h = fnv1a64(to_hex(m.dictionary_fingerprint), h);
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (auto c : m.rows[i]) h = fnv1a64(std::to_string(c) + ",", h);
    h = fnv1a64(labels[i] ? "+;" : "-;", h);
  }
  h = fnv1a64(nlohmann::json{config.svm.c, config.svm.tolerance, config.svm.max_epochs, config.svm.seed,
                             config.nb_alpha}
                  .dump(),
              h);
  return to_hex(h);
}

}  // namespace

std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::NaiveBayes: return "nb";
    case ClassifierKind::LinearSvm: return "svm";
    case ClassifierKind::DecisionTree: return "tree";
  }
  return "svm";
}

ClassifierKind parse_classifier(std::string_view s) {
  if (s == "nb" || s == "NaiveBayes") return ClassifierKind::NaiveBayes;
  if (s == "svm" || s == "LinearSVM") return ClassifierKind::LinearSvm;
  if (s == "tree" || s == "DecisionTree") return ClassifierKind::DecisionTree;
  throw ValidationError("unknown classifier '" + std::string(s) + "' (expected nb, svm or tree)");
}

NaiveBayesParams train_naive_bayes(const EncodedMatrix& m, const std::vector<bool>& labels, double alpha) {
  check_shapes(m, labels);
  if (alpha <= 0.0) throw ValidationError("Naive Bayes smoothing must be positive");
  std::array<double, 2> n{};
  std::vector<std::array<double, 2>> active(m.num_columns, {0.0, 0.0});
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const int cls = labels[i] ? 1 : 0;
    n[cls] += 1.0;
    for (auto c : m.rows[i]) active[c][cls] += 1.0;
  }
  NaiveBayesParams p;
  const double total = n[0] + n[1];
  for (int cls = 0; cls < 2; ++cls) p.log_prior[cls] = std::log(n[cls] / total);
  p.log_active.resize(m.num_columns);
  p.log_inactive.resize(m.num_columns);
  for (std::size_t j = 0; j < m.num_columns; ++j) {
    for (int cls = 0; cls < 2; ++cls) {
      const double denom = n[cls] + 2.0 * alpha;
      p.log_active[j][cls] = std::log((active[j][cls] + alpha) / denom);
      p.log_inactive[j][cls] = std::log((n[cls] - active[j][cls] + alpha) / denom);
    }
  }
  return p;
}

double naive_bayes_margin(const NaiveBayesParams& p, std::span<const std::uint32_t> row) {
  std::array<double, 2> score = p.log_prior;
  for (std::size_t j = 0; j < p.log_inactive.size(); ++j)
    for (int cls = 0; cls < 2; ++cls) score[cls] += p.log_inactive[j][cls];
  for (auto c : row)
    for (int cls = 0; cls < 2; ++cls) score[cls] += p.log_active[c][cls] - p.log_inactive[c][cls];
  return score[1] - score[0];
}

SvmParams train_linear_svm(const EncodedMatrix& m, const std::vector<bool>& labels, const SvmConfig& config,
                           TrainingTrace* trace) {
  check_shapes(m, labels);
  if (m.num_rows() < 2) throw ValidationError("linear SVM needs at least two examples");
  if (config.c <= 0.0) throw ValidationError("SVM cost must be positive");

  // Dual coordinate descent on the hinge-loss dual; the bias is a constant
  // feature of value 1 and is regularized with the weights.
  const std::size_t n = m.num_rows();
  SvmParams p;
  p.weights.assign(m.num_columns, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> diag(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = static_cast<double>(m.rows[i].size()) + 1.0;
    y[i] = labels[i] ? 1.0 : -1.0;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(config.seed);

  TrainingTrace local;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    for (std::size_t i = 0; i + 1 < n; ++i) std::swap(order[i], order[i + uniform_index(rng, n - i)]);
    for (auto i : order) {
      const auto& row = m.rows[i];
      const double g = y[i] * (dot(p.weights, row) + p.bias) - 1.0;
      double pg = g;
      if (alpha[i] == 0.0)
        pg = std::min(g, 0.0);
      else if (alpha[i] == config.c)
        pg = std::max(g, 0.0);
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / diag[i], 0.0, config.c);
      const double delta = (alpha[i] - old) * y[i];
      if (delta == 0.0) continue;
      for (auto c : row) p.weights[c] += delta;
      p.bias += delta;
    }

    const double reg = half_norm(p);
    double hinge = 0.0;
    double alpha_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      hinge += std::max(0.0, 1.0 - y[i] * (dot(p.weights, m.rows[i]) + p.bias));
      alpha_sum += alpha[i];
    }
    const double primal = reg + config.c * hinge;
    const double dual = reg - alpha_sum;
    local.primal_objective.push_back(primal);
    local.dual_objective.push_back(dual);
    local.epochs = epoch + 1;
    if (primal + dual <= config.tolerance * std::max(primal, 1e-12)) {
      local.converged = true;
      break;
    }
  }
  if (!local.converged)
    detail::log().debug("linear SVM stopped after {} epochs without reaching tolerance", local.epochs);
  if (trace) *trace = std::move(local);
  return p;
}

double svm_margin(const SvmParams& p, std::span<const std::uint32_t> row) { return dot(p.weights, row) + p.bias; }

Model train(ClassifierKind kind, const EncodedMatrix& matrix, const ColumnDictionary& dictionary,
            const std::vector<bool>& labels, const TrainConfig& config, TrainingTrace* trace) {
  check_shapes(matrix, labels);
  if (matrix.dictionary_fingerprint != dictionary.fingerprint() || matrix.num_columns != dictionary.size())
    throw ValidationError("matrix was not encoded with the given dictionary");
  if (matrix.num_rows() == 0) throw ValidationError("cannot train on an empty matrix");

  Model model;
  model.kind = kind;
  model.dictionary = dictionary;
  model.selected_features = dictionary.features();
  model.fingerprint = training_fingerprint(kind, matrix, labels, config);

  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  if (positives == 0 || positives == labels.size()) {
    detail::log().warn("single-class training set ({} rows); using a constant {} model", labels.size(),
                       positives ? "positive" : "negative");
    model.constant_label = positives > 0;
    model.params = SvmParams{std::vector<double>(matrix.num_columns, 0.0), positives ? 1.0 : -1.0};
    return model;
  }

  switch (kind) {
    case ClassifierKind::NaiveBayes:
      model.params = train_naive_bayes(matrix, labels, config.nb_alpha);
      break;
    case ClassifierKind::LinearSvm:
      model.params = train_linear_svm(matrix, labels, config.svm, trace);
      break;
    case ClassifierKind::DecisionTree:
      model.params = TreeParams{CartTree::fit(matrix, labels, {}, CartOptions{})};
      break;
  }
  return model;
}

Prediction Model::predict(std::span<const std::uint32_t> row, std::uint64_t dictionary_fingerprint) const {
  if (dictionary_fingerprint != dictionary.fingerprint())
    throw ValidationError("vector was encoded with a different column dictionary");
  for (auto c : row)
    if (c >= dictionary.size()) throw ValidationError("encoded column out of range");
  if (constant_label) return {*constant_label, *constant_label ? 1.0 : -1.0};

  double score = 0.0;
  if (const auto* nb = std::get_if<NaiveBayesParams>(&params)) {
    // Exactly tied posteriors rarely cancel to 0.0 in log space.
    score = naive_bayes_margin(*nb, row);
    return {score > kNaiveBayesTie, score};
  } else if (const auto* svm = std::get_if<SvmParams>(&params)) {
    score = svm_margin(*svm, row);
  } else {
    const auto& leaf = std::get<TreeParams>(params).tree.leaf_for(row);
    const double total = leaf.positive + leaf.negative;
    score = (total > 0.0 ? leaf.positive / total : 0.0) - 0.5;
  }
  return {score > 0.0, score};
}

Prediction Model::predict(const FeatureVector& v) const {
  return predict(dictionary.encode(v), dictionary.fingerprint());
}

nlohmann::json Model::to_json() const {
  nlohmann::json j = {{"format", "vmwe-model"},
                      {"version", kFormatVersion},
                      {"kind", to_string(kind)},
                      {"dictionary", dictionary.to_json()},
                      {"selected_features", selected_features},
                      {"fingerprint", fingerprint},
                      {"constant_label", constant_label ? nlohmann::json(*constant_label) : nlohmann::json()}};
  if (const auto* nb = std::get_if<NaiveBayesParams>(&params)) {
    j["params"] = {{"type", "nb"},
                   {"log_prior", nb->log_prior},
                   {"log_active", nb->log_active},
                   {"log_inactive", nb->log_inactive}};
  } else if (const auto* svm = std::get_if<SvmParams>(&params)) {
    j["params"] = {{"type", "svm"}, {"weights", svm->weights}, {"bias", svm->bias}};
  } else {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : std::get<TreeParams>(params).tree.nodes())
      nodes.push_back({n.column, n.left, n.right, n.positive, n.negative});
    j["params"] = {{"type", "tree"}, {"nodes", std::move(nodes)}};
  }
  return j;
}

Model Model::from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "vmwe-model") throw ValidationError("not a model file");
    if (j.at("version").get<int>() != kFormatVersion)
      throw ValidationError("unsupported model version " + j.at("version").dump());
    Model m;
    m.kind = parse_classifier(j.at("kind").get<std::string>());
    m.dictionary = ColumnDictionary::from_json(j.at("dictionary"));
    j.at("selected_features").get_to(m.selected_features);
    j.at("fingerprint").get_to(m.fingerprint);
    if (!j.at("constant_label").is_null()) m.constant_label = j.at("constant_label").get<bool>();
    const auto& p = j.at("params");
    const auto type = p.at("type").get<std::string>();
    const std::size_t d = m.dictionary.size();
    if (type == "nb") {
      NaiveBayesParams nb;
      p.at("log_prior").get_to(nb.log_prior);
      p.at("log_active").get_to(nb.log_active);
      p.at("log_inactive").get_to(nb.log_inactive);
      if (nb.log_active.size() != d || nb.log_inactive.size() != d)
        throw ValidationError("Naive Bayes tables do not match the dictionary");
      m.params = std::move(nb);
    } else if (type == "svm") {
      SvmParams svm;
      p.at("weights").get_to(svm.weights);
      p.at("bias").get_to(svm.bias);
      if (svm.weights.size() != d) throw ValidationError("SVM weights do not match the dictionary");
      m.params = std::move(svm);
    } else if (type == "tree") {
      std::vector<TreeNode> nodes;
      for (const auto& n : p.at("nodes"))
        nodes.push_back({n.at(0).get<int>(), n.at(1).get<int>(), n.at(2).get<int>(), n.at(3).get<double>(),
                         n.at(4).get<double>()});
      m.params = TreeParams{CartTree(std::move(nodes), d)};
    } else {
      throw ValidationError("unknown model parameter type '" + type + "'");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model: ") + e.what());
  }
}

}  // namespace vmwe
