// vmwe: command-line front end, one subcommand per pipeline stage.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vmwe/classifiers.hpp"
#include "vmwe/corpus.hpp"
#include "vmwe/evaluation.hpp"
#include "vmwe/extraction.hpp"
#include "vmwe/features.hpp"
#include "vmwe/fingerprint.hpp"
#include "vmwe/io.hpp"
#include "vmwe/lexicon.hpp"
#include "vmwe/pipeline.hpp"
#include "vmwe/ranking.hpp"
#include "vmwe/sampling.hpp"
#include "vmwe/tuning.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitStage = 2;

std::string fingerprint_of(const json& params) { return vmwe::to_hex(vmwe::fnv1a64(params.dump())); }

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

vmwe::Lexicon load_lexicon(const std::string& path) { return vmwe::Lexicon::from_json(vmwe::read_json_file(path)); }

vmwe::CandidateSet load_featurized(const std::string& path) {
  auto set = vmwe::read_candidates_file(path);
  if (!set.candidates.empty() && !set.has_features())
    throw vmwe::ValidationError("'" + path + "' has no feature vectors; run featurize first");
  return set;
}

struct Options {
  std::size_t jobs = 1;
  bool quiet = false;

  // lexicon
  std::string train;
  int min_count = 2;
  // shared
  std::string lexicon, corpus, candidates, out, classifier = "svm";
  std::uint64_t seed = 42;
  std::optional<int> insertion_cap;
  // extract
  bool labeled = false;
  std::string report;
  // featurize
  std::string tsv, dictionary;
  // rank
  std::string method = "freq", features;
  bool use_labels = false;
  std::size_t trees = 10;
  // tune
  std::string ranking;
  std::size_t folds = 10;
  bool no_shuffle = false;
  // train
  std::string tuning;
  std::vector<std::string> feature_list;
  std::size_t top_k = 0;
  // predict
  std::string model, scores;
  // evaluate
  std::string gold, pred, scope = "seen";
  // sample
  std::vector<std::string> parts;
  std::string strata;
  std::size_t cap = static_cast<std::size_t>(-1);
  // run
  std::string config, output_dir;
};

int cmd_lexicon(const Options& o) {
  const auto train = vmwe::read_cupt_file(o.train);
  vmwe::LexiconStats stats;
  const auto lex = vmwe::build_lexicon(train, o.min_count, &stats);
  auto j = lex.to_json();
  j["fingerprint"] = fingerprint_of({{"stage", "lexicon"}, {"train", o.train}, {"min_count", o.min_count}});
  vmwe::write_json_file(o.out, j);
  spdlog::info("{} types from {} gold VMWEs ({} retained, {} in unparsed sentences)", lex.types().size(),
               stats.gold_total, stats.gold_retained, stats.skipped_unparsed);
  return 0;
}

int cmd_extract(const Options& o) {
  const auto lexicon = load_lexicon(o.lexicon);
  const auto corpus = vmwe::read_cupt_file(o.corpus);
  if (o.labeled)
    for (const auto& s : corpus)
      if (!s.annotated) throw vmwe::ValidationError("--labeled needs an annotated corpus; sentence " + s.sent_id + " is not");
  vmwe::ExtractionOptions opts;
  opts.insertion_cap = o.insertion_cap;
  vmwe::ExtractionStats stats;
  auto cands = vmwe::extract_candidates(corpus, lexicon, opts, &stats);
  if (!o.labeled)
    for (auto& c : cands) c.label = vmwe::Label::Unknown;
  const auto fp = fingerprint_of({{"stage", "extract"},
                                  {"lexicon", o.lexicon},
                                  {"corpus", o.corpus},
                                  {"labeled", o.labeled},
                                  {"insertion_cap", o.insertion_cap ? json(*o.insertion_cap) : json()}});
  vmwe::write_candidates_file(o.out, cands, {}, fp);
  json rep = {{"fingerprint", fp}, {"stats", stats.to_json()}};
  if (o.labeled) {
    const auto r = vmwe::extraction_report(cands, corpus, lexicon);
    rep["report"] = r.to_json();
    std::cout << "candidates " << r.candidates << "  positive " << r.positive << "  negative " << r.negative
              << "  recall " << r.recall << " (" << r.gold_found << "/" << r.gold_in_scope << ")\n";
  } else {
    std::cout << "candidates " << cands.size() << '\n';
  }
  if (!o.report.empty()) vmwe::write_json_file(o.report, rep);
  return 0;
}

int cmd_featurize(const Options& o) {
  const auto lexicon = load_lexicon(o.lexicon);
  auto set = vmwe::read_candidates_file(o.candidates);
  std::vector<vmwe::FeatureVector> vecs;
  vecs.reserve(set.candidates.size());
  for (const auto& c : set.candidates) vecs.push_back(vmwe::compute_features(c, lexicon));
  const auto fp = fingerprint_of({{"stage", "featurize"}, {"lexicon", o.lexicon}, {"candidates", set.fingerprint}});
  vmwe::write_candidates_file(o.out, set.candidates, vecs, fp);
  if (!o.tsv.empty() || !o.dictionary.empty()) {
    auto [matrix, dict] = vmwe::encode(vecs);
    if (!o.tsv.empty()) {
      std::vector<vmwe::Label> labels;
      for (const auto& c : set.candidates) labels.push_back(c.label);
      std::ofstream tsv(o.tsv, std::ios::binary);
      if (!tsv) throw vmwe::Error("cannot write '" + o.tsv + "'");
      vmwe::write_feature_tsv(tsv, matrix, dict, labels, fp);
    }
    if (!o.dictionary.empty()) {
      auto j = dict.to_json();
      j["source_fingerprint"] = fp;
      vmwe::write_json_file(o.dictionary, j);
    }
  }
  std::cout << "featurized " << vecs.size() << " candidates\n";
  return 0;
}

int cmd_rank(const Options& o) {
  const auto method = vmwe::parse_ranking_method(o.method);
  if (method != vmwe::RankingMethod::Freq && !o.use_labels)
    throw vmwe::ValidationError(std::string(vmwe::to_string(method)) + " ranking is supervised; pass --labels");
  vmwe::FeatureRanking r;
  std::string source_fp;
  vmwe::ForestOptions fo;
  fo.trees = o.trees;
  fo.seed = o.seed;
  if (ends_with(o.features, ".tsv")) {
    const auto t = vmwe::read_feature_tsv_file(o.features);
    source_fp = t.fingerprint;
    switch (method) {
      case vmwe::RankingMethod::Freq: r = vmwe::rank_freq(t.matrix, t.dictionary); break;
      case vmwe::RankingMethod::Chi2: r = vmwe::rank_chi2(t.matrix, t.dictionary, t.positive_labels()); break;
      case vmwe::RankingMethod::Forest:
        r = vmwe::rank_forest(t.matrix, t.dictionary, t.positive_labels(), fo);
        break;
      case vmwe::RankingMethod::Gain:
        throw vmwe::ValidationError("gain ranking needs raw feature values; pass the featurized JSONL file");
    }
  } else {
    const auto set = load_featurized(o.features);
    source_fp = set.fingerprint;
    if (method == vmwe::RankingMethod::Freq) {
      r = vmwe::rank_freq(set.features);
    } else {
      const auto labels = set.positive_labels();
      if (method == vmwe::RankingMethod::Gain) {
        r = vmwe::rank_gain(set.features, labels);
      } else {
        auto [matrix, dict] = vmwe::encode(set.features);
        r = method == vmwe::RankingMethod::Chi2 ? vmwe::rank_chi2(matrix, dict, labels)
                                                : vmwe::rank_forest(matrix, dict, labels, fo);
      }
    }
  }
  r.seed = o.seed;
  auto j = r.to_json();
  j["fingerprint"] = fingerprint_of(
      {{"stage", "rank"}, {"method", o.method}, {"source", source_fp}, {"seed", o.seed}, {"trees", o.trees}});
  vmwe::write_json_file(o.out, j);
  for (std::size_t i = 0; i < r.entries.size() && i < 10; ++i)
    std::printf("%3zu  %-32s %.6g\n", i + 1, r.entries[i].feature.c_str(), r.entries[i].score);
  return 0;
}

int cmd_tune(const Options& o) {
  const auto ranking = vmwe::FeatureRanking::from_json(vmwe::read_json_file(o.ranking));
  const auto set = load_featurized(o.candidates);
  const auto kind = vmwe::parse_classifier(o.classifier);
  vmwe::CvOptions cv;
  cv.folds = o.folds;
  cv.seed = o.seed;
  cv.shuffle = !o.no_shuffle;
  cv.train.svm.seed = o.seed;
  auto result = vmwe::greedy_tune(ranking, set.features, set.positive_labels(), kind, cv, o.jobs);
  auto j = result.to_json();
  j["fingerprint"] = fingerprint_of({{"stage", "tune"},
                                     {"ranking", ranking.to_json()},
                                     {"candidates", set.fingerprint},
                                     {"classifier", vmwe::to_string(kind)},
                                     {"folds", o.folds},
                                     {"seed", o.seed},
                                     {"shuffle", cv.shuffle}});
  vmwe::write_json_file(o.out, j);
  std::printf("best k=%zu  P=%.3f R=%.3f F=%.3f sigma=%.3f\n", result.best_k, result.mean_precision,
              result.mean_recall, result.mean_f1, result.sigma);
  return 0;
}

int cmd_train(const Options& o) {
  const auto set = load_featurized(o.candidates);
  const auto kind = vmwe::parse_classifier(o.classifier);
  std::vector<std::string> selected;
  if (!o.tuning.empty()) {
    selected = vmwe::TuningResult::from_json(vmwe::read_json_file(o.tuning)).selected_features;
  } else if (!o.ranking.empty()) {
    const auto r = vmwe::FeatureRanking::from_json(vmwe::read_json_file(o.ranking));
    selected = r.top(o.top_k ? o.top_k : r.size());
  } else {
    selected = o.feature_list;
  }
  const std::vector<std::string>* sel = selected.empty() ? nullptr : &selected;
  auto [matrix, dict] = vmwe::encode(set.features, sel);
  vmwe::TrainConfig tc;
  tc.svm.seed = o.seed;
  vmwe::TrainingTrace trace;
  auto model = vmwe::train(kind, matrix, dict, set.positive_labels(), tc, &trace);
  model.selected_features = selected.empty() ? dict.features() : selected;
  model.fingerprint = fingerprint_of({{"stage", "train"},
                                      {"candidates", set.fingerprint},
                                      {"classifier", vmwe::to_string(kind)},
                                      {"features", model.selected_features},
                                      {"seed", o.seed}});
  vmwe::write_json_file(o.out, model.to_json());
  if (kind == vmwe::ClassifierKind::LinearSvm)
    spdlog::info("svm: {} epochs, converged={}", trace.epochs, trace.converged);
  std::cout << "trained " << vmwe::to_string(kind) << " on " << matrix.num_rows() << " candidates, "
            << dict.size() << " columns\n";
  return 0;
}

int cmd_predict(const Options& o) {
  const auto model = vmwe::Model::from_json(vmwe::read_json_file(o.model));
  const auto set = load_featurized(o.candidates);
  auto corpus = vmwe::read_cupt_file(o.corpus);
  for (const auto& c : set.candidates)
    if (c.sent_index >= corpus.size() || corpus[c.sent_index].sent_id != c.sent_id)
      throw vmwe::ValidationError("candidate sentence " + c.sent_id + " not found in '" + o.corpus + "'");
  const auto preds = vmwe::predict_vmwes(model, set.candidates, set.features);
  if (!corpus.empty()) corpus.front().comments.push_back(vmwe::fingerprint_comment(model.fingerprint));
  vmwe::write_text_file(o.out, vmwe::write_cupt_string(corpus, &preds));
  if (!o.scores.empty()) {
    std::ofstream out(o.scores, std::ios::binary);
    if (!out) throw vmwe::Error("cannot write '" + o.scores + "'");
    for (std::size_t i = 0; i < set.candidates.size(); ++i) {
      const auto p = model.predict(set.features[i]);
      out << json{{"sent_id", set.candidates[i].sent_id},
                  {"token_ids", set.candidates[i].component_ids},
                  {"type_id", set.candidates[i].type_id},
                  {"predicted", p.label},
                  {"score", p.score}}
                 .dump()
          << '\n';
    }
  }
  std::cout << "predicted " << preds.size() << " VMWEs among " << set.candidates.size() << " candidates\n";
  return 0;
}

int cmd_evaluate(const Options& o) {
  const auto gold = vmwe::read_cupt_file(o.gold);
  const auto system = vmwe::read_cupt_file(o.pred);
  const auto lexicon = load_lexicon(o.lexicon);
  if (system.size() != gold.size())
    throw vmwe::ValidationError("prediction file has " + std::to_string(system.size()) + " sentences, gold has " +
                                std::to_string(gold.size()));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].annotated) throw vmwe::ValidationError("gold sentence " + gold[i].sent_id + " is not annotated");
    if (system[i].sent_id != gold[i].sent_id || system[i].tokens.size() != gold[i].tokens.size())
      throw vmwe::ValidationError("prediction sentence " + system[i].sent_id + " does not align with gold " +
                                  gold[i].sent_id);
  }
  const auto preds = vmwe::predictions_from_annotations(system);
  std::vector<vmwe::EvalReport> reports;
  const auto scope = vmwe::parse_scope(o.scope);
  if (scope == vmwe::Scope::Category) {
    reports.push_back(vmwe::evaluate_mwe(preds, gold, lexicon, vmwe::Scope::Seen));
    for (auto& r : vmwe::evaluate_by_category(preds, gold, lexicon, vmwe::Scope::Seen)) reports.push_back(std::move(r));
  } else {
    reports.push_back(vmwe::evaluate_mwe(preds, gold, lexicon, scope));
  }
  std::cout << vmwe::format_reports(reports);
  if (!o.out.empty()) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    vmwe::write_json_file(o.out, {{"fingerprint", fingerprint_of({{"stage", "evaluate"},
                                                                   {"gold", o.gold},
                                                                   {"pred", o.pred},
                                                                   {"lexicon", o.lexicon},
                                                                   {"scope", o.scope}})},
                                  {"reports", arr}});
  }
  return 0;
}

int cmd_sample(const Options& o) {
  const auto lexicon = load_lexicon(o.lexicon);
  const auto strata = vmwe::StrataConfig::from_json(vmwe::read_json_file(o.strata));
  std::vector<std::vector<vmwe::Sentence>> corpora;
  std::vector<vmwe::CorpusPart> parts;
  for (const auto& p : o.parts) corpora.push_back(vmwe::read_cupt_file(p));
  for (std::size_t i = 0; i < o.parts.size(); ++i)
    parts.push_back({fs::path(o.parts[i]).filename().string(), corpora[i]});
  vmwe::ExtractionOptions opts;
  opts.insertion_cap = o.insertion_cap;
  auto sample = vmwe::sample_external(lexicon, parts, strata, o.cap, opts);
  for (auto& item : sample.items) item.candidate.label = vmwe::Label::Unknown;
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw vmwe::Error("cannot write '" + o.out + "'");
  vmwe::write_sample(out, sample, parts,
                     fingerprint_of({{"stage", "sample"},
                                     {"lexicon", o.lexicon},
                                     {"parts", o.parts},
                                     {"strata", strata.to_json()},
                                     {"cap", o.cap}}));
  std::cout << "sampled " << sample.types.size() << " types, " << sample.items.size() << " candidates\n";
  return 0;
}

int cmd_run(const Options& o) {
  auto config = vmwe::PipelineConfig::load(o.config);
  if (!o.output_dir.empty()) config.output_dir = o.output_dir;
  const auto result = vmwe::run_pipeline(config, o.jobs);
  std::cout << result.summary;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("cli");
  spdlog::set_default_logger(logger);

  CLI::App app{"Identification of previously seen verbal multiword expressions"};
  app.require_subcommand(1);
  Options o;
  app.add_option("-j,--jobs", o.jobs, "Worker threads for tuning")->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", o.quiet, "Only log warnings and errors");

  auto* lex = app.add_subcommand("lexicon", "Build a VMWE type lexicon from an annotated corpus");
  lex->add_option("--train", o.train, "Annotated training corpus (.cupt)")->required()->check(CLI::ExistingFile);
  lex->add_option("--min-count", o.min_count, "Minimum annotated occurrences per type")->check(CLI::PositiveNumber);
  lex->add_option("--out", o.out, "Output lexicon JSON")->required();

  auto* ext = app.add_subcommand("extract", "Extract candidate occurrences of lexicon types");
  ext->add_option("--lexicon", o.lexicon)->required()->check(CLI::ExistingFile);
  ext->add_option("--corpus", o.corpus)->required()->check(CLI::ExistingFile);
  ext->add_option("--out", o.out, "Candidate JSONL")->required();
  ext->add_flag("--labeled", o.labeled, "Label candidates against the corpus annotation");
  ext->add_option("--insertion-cap", o.insertion_cap, "Global maximum number of insertions");
  ext->add_option("--report", o.report, "Extraction statistics JSON");

  auto* fea = app.add_subcommand("featurize", "Compute ABS/REL features of candidates");
  fea->add_option("--lexicon", o.lexicon)->required()->check(CLI::ExistingFile);
  fea->add_option("--candidates", o.candidates)->required()->check(CLI::ExistingFile);
  fea->add_option("--out", o.out, "Candidate JSONL with features")->required();
  fea->add_option("--tsv", o.tsv, "Binary feature matrix");
  fea->add_option("--dictionary", o.dictionary, "Column dictionary JSON");

  auto* rnk = app.add_subcommand("rank", "Rank features");
  rnk->add_option("--method", o.method, "freq, chi2, gain or forest")->required();
  rnk->add_option("--features", o.features, "Feature TSV or featurized JSONL")->required()->check(CLI::ExistingFile);
  rnk->add_flag("--labels", o.use_labels, "Use candidate labels (supervised methods)");
  rnk->add_option("--seed", o.seed);
  rnk->add_option("--trees", o.trees, "Forest size")->check(CLI::PositiveNumber);
  rnk->add_option("--out", o.out)->required();

  auto* tun = app.add_subcommand("tune", "Greedy choice of the number of top-ranked features");
  tun->add_option("--ranking", o.ranking)->required()->check(CLI::ExistingFile);
  tun->add_option("--candidates", o.candidates, "Featurized JSONL")->required()->check(CLI::ExistingFile);
  tun->add_option("--classifier", o.classifier, "nb, svm or tree");
  tun->add_option("--folds", o.folds)->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
  tun->add_option("--seed", o.seed);
  tun->add_flag("--no-shuffle", o.no_shuffle, "Fold in corpus order");
  tun->add_option("--out", o.out)->required();

  auto* trn = app.add_subcommand("train", "Train a classifier on featurized candidates");
  trn->add_option("--candidates", o.candidates)->required()->check(CLI::ExistingFile);
  trn->add_option("--classifier", o.classifier, "nb, svm or tree");
  auto* t_tuning = trn->add_option("--tuning", o.tuning, "Use the selected features of a tuning result");
  auto* t_ranking = trn->add_option("--ranking", o.ranking, "Use the top --k features of a ranking");
  trn->add_option("--k", o.top_k);
  auto* t_features = trn->add_option("--features", o.feature_list, "Explicit feature names")->delimiter(',');
  t_tuning->excludes(t_ranking)->excludes(t_features);
  t_ranking->excludes(t_features);
  trn->add_option("--seed", o.seed);
  trn->add_option("--out", o.out)->required();

  auto* prd = app.add_subcommand("predict", "Classify candidates and write a .cupt file");
  prd->add_option("--model", o.model)->required()->check(CLI::ExistingFile);
  prd->add_option("--candidates", o.candidates)->required()->check(CLI::ExistingFile);
  prd->add_option("--corpus", o.corpus, "Corpus the candidates were extracted from")->required()->check(CLI::ExistingFile);
  prd->add_option("--out", o.out)->required();
  prd->add_option("--scores", o.scores, "Per-candidate decisions as JSONL");

  auto* evl = app.add_subcommand("evaluate", "Score predicted VMWEs against gold");
  evl->add_option("--gold", o.gold)->required()->check(CLI::ExistingFile);
  evl->add_option("--pred", o.pred)->required()->check(CLI::ExistingFile);
  evl->add_option("--lexicon", o.lexicon)->required()->check(CLI::ExistingFile);
  evl->add_option("--scope", o.scope, "all, seen, variant or category");
  evl->add_option("--out", o.out, "Report JSON");

  auto* smp = app.add_subcommand("sample", "Stratified candidate sample from external corpora");
  smp->add_option("--lexicon", o.lexicon)->required()->check(CLI::ExistingFile);
  smp->add_option("--corpus", o.parts, "Corpus part (repeatable)")->required()->check(CLI::ExistingFile);
  smp->add_option("--strata", o.strata, "Strata JSON")->required()->check(CLI::ExistingFile);
  smp->add_option("--cap", o.cap, "Maximum number of candidates");
  smp->add_option("--insertion-cap", o.insertion_cap);
  smp->add_option("--out", o.out)->required();

  auto* run = app.add_subcommand("run", "Run the whole pipeline from a config file");
  run->add_option("--config", o.config)->required()->check(CLI::ExistingFile);
  run->add_option("--output-dir", o.output_dir, "Overrides output_dir of the config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }
  spdlog::set_level(o.quiet ? spdlog::level::warn : spdlog::level::info);

  try {
    if (*lex) return cmd_lexicon(o);
    if (*ext) return cmd_extract(o);
    if (*fea) return cmd_featurize(o);
    if (*rnk) return cmd_rank(o);
    if (*tun) return cmd_tune(o);
    if (*trn) return cmd_train(o);
    if (*prd) return cmd_predict(o);
    if (*evl) return cmd_evaluate(o);
    if (*smp) return cmd_sample(o);
    if (*run) return cmd_run(o);
  } catch (const vmwe::StageError& e) {
    spdlog::error("{}", e.what());
    return kExitStage;
  } catch (const vmwe::ValidationError& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const vmwe::ParseError& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const vmwe::StructuralError& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitStage;
  }
  return 0;
}
