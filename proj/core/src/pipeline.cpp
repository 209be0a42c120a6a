#include "vmwe/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "log.hpp"
#include "vmwe/corpus.hpp"
#include "vmwe/evaluation.hpp"
#include "vmwe/fingerprint.hpp"
#include "vmwe/io.hpp"
#include "vmwe/lexicon.hpp"

namespace vmwe {
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kConfigKeys = {"train",        "test",   "unlabeled",     "min_count", "methods",
                                           "classifiers",  "folds",  "seed",          "shuffle",   "forest_trees",
                                           "insertion_cap", "svm",   "final",         "output_dir"};

std::string resolve(const nlohmann::json& j, const char* key, const fs::path& base) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  const auto s = j.at(key).get<std::string>();
  if (s.empty()) return {};
  fs::path p(s);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal().string();
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string cell_name(const Cell& c) {
  return std::string(to_string(c.method)) + "_" + std::string(to_string(c.classifier));
}

template <typename F>
auto run_stage(const char* name, F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  detail::log().info("stage {} started", name);
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      detail::log().info("stage {} done in {:.2f}s", name,
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    } else {
      auto r = fn();
      detail::log().info("stage {} done in {:.2f}s", name,
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      return r;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

nlohmann::json with_fingerprint(nlohmann::json j, const std::string& fp) {
  j["fingerprint"] = fp;
  return j;
}

std::vector<FeatureVector> featurize(std::span<const Candidate> candidates, const Lexicon& lexicon) {
  std::vector<FeatureVector> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(compute_features(c, lexicon));
  return out;
}

std::vector<Label> labels_of(std::span<const Candidate> candidates) {
  std::vector<Label> out;
  for (const auto& c : candidates) out.push_back(c.label);
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kConfigKeys.count(key)) throw ValidationError("unknown config key '" + key + "'");
  PipelineConfig c;
  try {
    c.train = resolve(j, "train", base_dir);
    if (c.train.empty()) throw ValidationError("config is missing the train corpus");
    c.test = resolve(j, "test", base_dir);
    c.unlabeled = resolve(j, "unlabeled", base_dir);
    c.min_count = j.value("min_count", c.min_count);
    if (c.min_count < 1) throw ValidationError("min_count must be at least 1");
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(parse_ranking_method(m.get<std::string>()));
    }
    if (j.contains("classifiers")) {
      c.classifiers.clear();
      for (const auto& k : j.at("classifiers")) c.classifiers.push_back(parse_classifier(k.get<std::string>()));
    }
    if (c.methods.empty() || c.classifiers.empty())
      throw ValidationError("methods and classifiers must not be empty");
    c.folds = j.value("folds", c.folds);
    if (c.folds < 2) throw ValidationError("folds must be at least 2");
    if (!j.contains("seed")) throw ValidationError("config is missing the seed");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.shuffle = j.value("shuffle", c.shuffle);
    c.forest_trees = j.value("forest_trees", c.forest_trees);
    if (c.forest_trees == 0) throw ValidationError("forest_trees must be positive");
    if (j.contains("insertion_cap") && !j.at("insertion_cap").is_null()) {
      c.insertion_cap = j.at("insertion_cap").get<int>();
      if (*c.insertion_cap < 0) throw ValidationError("insertion_cap must be non-negative");
    }
    if (j.contains("svm")) {
      const auto& s = j.at("svm");
      c.svm.c = s.value("c", c.svm.c);
      c.svm.tolerance = s.value("tolerance", c.svm.tolerance);
      c.svm.max_epochs = s.value("max_epochs", c.svm.max_epochs);
      if (c.svm.c <= 0 || c.svm.tolerance <= 0 || c.svm.max_epochs <= 0)
        throw ValidationError("svm parameters must be positive");
    }
    c.svm.seed = c.seed;
    if (j.contains("final") && !j.at("final").is_null()) {
      const auto& f = j.at("final");
      c.final_cell = Cell{parse_ranking_method(f.at("method").get<std::string>()),
                          parse_classifier(f.at("classifier").get<std::string>())};
    }
    if (j.contains("output_dir")) {
      c.output_dir = resolve(j, "output_dir", base_dir);
    } else if (!base_dir.empty()) {
      c.output_dir = (base_dir / c.output_dir).lexically_normal().string();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  return from_json(read_json_file(path), fs::path(path).parent_path());
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json methods_j = nlohmann::json::array(), classifiers_j = nlohmann::json::array();
  for (auto m : methods) methods_j.push_back(to_string(m));
  for (auto k : classifiers) classifiers_j.push_back(to_string(k));
  nlohmann::json j = {{"train", train},
                      {"test", test},
                      {"unlabeled", unlabeled},
                      {"min_count", min_count},
                      {"methods", methods_j},
                      {"classifiers", classifiers_j},
                      {"folds", folds},
                      {"seed", seed},
                      {"shuffle", shuffle},
                      {"forest_trees", forest_trees},
                      {"svm", {{"c", svm.c}, {"tolerance", svm.tolerance}, {"max_epochs", svm.max_epochs}}}};
  j["insertion_cap"] = insertion_cap ? nlohmann::json(*insertion_cap) : nlohmann::json();
  j["final"] = final_cell ? nlohmann::json{{"method", to_string(final_cell->method)},
                                           {"classifier", to_string(final_cell->classifier)}}
                          : nlohmann::json();
  return j;
}

// The output directory is deliberately left out: where a run is written does
// not change what it computes.
std::string PipelineConfig::fingerprint() const { return to_hex(fnv1a64(to_json().dump())); }

std::vector<PredictedVmwe> predict_vmwes(const Model& model, std::span<const Candidate> candidates,
                                         std::span<const FeatureVector> features) {
  if (features.size() != candidates.size()) throw ValidationError("feature vectors do not match candidates");
  std::map<std::pair<std::size_t, std::vector<int>>, PredictedVmwe> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto pred = model.predict(features[i]);
    if (!pred.label) continue;
    const auto& c = candidates[i];
    PredictedVmwe p;
    p.sent_index = c.sent_index;
    p.sent_id = c.sent_id;
    p.token_ids = c.component_ids;
    p.score = pred.score;
    p.candidate = i;
    auto it = features[i].values.find("ABS_VMWEcat");
    if (it != features[i].values.end())
      if (const auto* s = std::get_if<std::string>(&it->second)) p.category = parse_category(*s);
    auto key = std::make_pair(p.sent_index, p.token_ids);
    auto [pos, inserted] = best.emplace(key, p);
    if (!inserted && p.score > pos->second.score) pos->second = p;
  }
  std::vector<PredictedVmwe> out;
  for (auto& [_, p] : best) out.push_back(std::move(p));
  return out;
}

std::string fingerprint_comment(const std::string& fingerprint) { return "# vmwe.fingerprint = " + fingerprint; }

PipelineResult run_pipeline(const PipelineConfig& config, std::size_t jobs) {
  for (const auto* path : {&config.train, &config.test, &config.unlabeled})
    if (!path->empty() && !fs::is_regular_file(*path)) throw ValidationError("input file not found: " + *path);
  if (config.train.empty()) throw ValidationError("config is missing the train corpus");

  const std::string fp = config.fingerprint();
  PipelineResult result;
  result.run_dir = config.output_dir;
  fs::create_directories(result.run_dir);
  const auto out = [&](const std::string& name) { return (result.run_dir / name).string(); };
  detail::log().info("run {} -> {}", fp, result.run_dir.string());

  auto cfg_json = config.to_json();
  write_json_file(out("config.json"), with_fingerprint(cfg_json, fp));

  const auto train = run_stage("read", [&] { return read_cupt_file(config.train); });
  const auto test = config.test.empty() ? std::vector<Sentence>{}
                                        : run_stage("read", [&] { return read_cupt_file(config.test); });

  LexiconStats lex_stats;
  const auto lexicon = run_stage("lexicon", [&] {
    auto lex = build_lexicon(train, config.min_count, &lex_stats);
    if (lex.empty()) throw ValidationError("no VMWE type reaches min_count in the training corpus");
    write_json_file(out("lexicon.json"), with_fingerprint(lex.to_json(), fp));
    return lex;
  });

  ExtractionOptions xopts;
  xopts.insertion_cap = config.insertion_cap;
  std::vector<Candidate> train_cands, test_cands;
  run_stage("extract", [&] {
    ExtractionStats train_stats, test_stats;
    train_cands = extract_candidates(train, lexicon, xopts, &train_stats);
    nlohmann::json rep = {{"fingerprint", fp},
                          {"lexicon",
                           {{"gold_total", lex_stats.gold_total},
                            {"gold_retained", lex_stats.gold_retained},
                            {"skipped_unparsed", lex_stats.skipped_unparsed},
                            {"types", lexicon.types().size()}}},
                          {"train",
                           {{"report", extraction_report(train_cands, train, lexicon).to_json()},
                            {"stats", train_stats.to_json()}}}};
    if (!test.empty()) {
      test_cands = extract_candidates(test, lexicon, xopts, &test_stats);
      nlohmann::json t = {{"stats", test_stats.to_json()}};
      const bool labeled =
          std::all_of(test_cands.begin(), test_cands.end(), [](const Candidate& c) { return c.label != Label::Unknown; });
      if (labeled) t["report"] = extraction_report(test_cands, test, lexicon).to_json();
      rep["test"] = t;
    }
    write_json_file(out("extraction.json"), rep);
  });

  std::vector<FeatureVector> train_vecs, test_vecs;
  std::vector<bool> labels;
  EncodedMatrix matrix;
  ColumnDictionary dictionary;
  run_stage("features", [&] {
    train_vecs = featurize(train_cands, lexicon);
    test_vecs = featurize(test_cands, lexicon);
    write_candidates_file(out("train_candidates.jsonl"), train_cands, train_vecs, fp);
    if (!test.empty()) write_candidates_file(out("test_candidates.jsonl"), test_cands, test_vecs, fp);
    std::tie(matrix, dictionary) = encode(train_vecs);
    const auto lab = labels_of(train_cands);
    std::ofstream tsv(out("features_train.tsv"), std::ios::binary);
    write_feature_tsv(tsv, matrix, dictionary, lab, fp);
    write_json_file(out("dictionary.json"), with_fingerprint(dictionary.to_json(), fp));
    for (auto l : lab) {
      if (l == Label::Unknown) throw ValidationError("training candidates must be labeled");
      labels.push_back(l == Label::Positive);
    }
    if (train_vecs.empty()) throw ValidationError("no candidates extracted from the training corpus");
  });

  std::map<RankingMethod, FeatureRanking> rankings;
  run_stage("rank", [&] {
    for (auto m : config.methods) {
      FeatureRanking r;
      switch (m) {
        case RankingMethod::Freq:
          if (!config.unlabeled.empty()) {
            std::ifstream in(config.unlabeled, std::ios::binary);
            CuptReader reader(in);
            CandidateExtractor extractor(lexicon, xopts);
            PairCounter counter;
            std::size_t idx = 0;
            while (auto s = reader.next())
              for (const auto& c : extractor.extract(*s, idx++)) counter.add(compute_features(c, lexicon));
            r = counter.ranking();
            r.provenance = "unlabeled:" + fs::path(config.unlabeled).filename().string() +
                           " candidates=" + std::to_string(counter.rows());
          } else {
            r = rank_freq(train_vecs);
            r.provenance = "train candidates";
          }
          break;
        case RankingMethod::Chi2: r = rank_chi2(matrix, dictionary, labels); break;
        case RankingMethod::Gain: r = rank_gain(train_vecs, labels); break;
        case RankingMethod::Forest: {
          ForestOptions fo;
          fo.trees = config.forest_trees;
          fo.seed = config.seed;
          r = rank_forest(matrix, dictionary, labels, fo);
          break;
        }
      }
      r.seed = config.seed;
      if (r.entries.empty()) throw ValidationError(std::string(to_string(m)) + " ranking is empty");
      write_json_file(out("ranking_" + std::string(to_string(m)) + ".json"), with_fingerprint(r.to_json(), fp));
      rankings.emplace(m, std::move(r));
    }
  });

  run_stage("tune", [&] {
    CvOptions cv;
    cv.folds = config.folds;
    cv.seed = config.seed;
    cv.shuffle = config.shuffle;
    cv.train.svm = config.svm;
    if (labels.size() < cv.folds) throw ValidationError("fewer training candidates than folds");
    for (auto m : config.methods) {
      for (auto k : config.classifiers) {
        Cell cell{m, k};
        auto t = greedy_tune(rankings.at(m), train_vecs, labels, k, cv, jobs);
        write_json_file(out("tuning_" + cell_name(cell) + ".json"), with_fingerprint(t.to_json(), fp));
        result.cells.push_back({cell, std::move(t)});
      }
    }
  });

  if (config.final_cell) {
    result.final_cell = *config.final_cell;
  } else {
    const CellResult* best = &result.cells.front();
    for (const auto& c : result.cells)
      if (c.tuning.mean_f1 > best->tuning.mean_f1) best = &c;
    result.final_cell = best->cell;
  }
  const auto final_it = std::find_if(result.cells.begin(), result.cells.end(), [&](const CellResult& c) {
    return c.cell.method == result.final_cell.method && c.cell.classifier == result.final_cell.classifier;
  });
  if (final_it == result.cells.end())
    throw ValidationError("final cell " + cell_name(result.final_cell) + " is not among the tuned cells");

  const auto model = run_stage("train", [&] {
    const auto& selected = final_it->tuning.selected_features;
    auto [m, dict] = encode(train_vecs, &selected);
    TrainConfig tc;
    tc.svm = config.svm;
    auto model = vmwe::train(result.final_cell.classifier, m, dict, labels, tc);
    model.selected_features = selected;
    model.fingerprint = fp;
    write_json_file(out("model.json"), model.to_json());
    return model;
  });

  std::vector<EvalReport> reports;
  if (!test.empty()) {
    const auto preds = run_stage("predict", [&] {
      auto p = predict_vmwes(model, test_cands, test_vecs);
      auto annotated = test;
      annotated.front().comments.push_back(fingerprint_comment(fp));
      write_text_file(out("predictions.cupt"), write_cupt_string(annotated, &p));
      return p;
    });

    run_stage("evaluate", [&] {
      const bool labeled = std::all_of(test.begin(), test.end(), [](const Sentence& s) { return s.annotated; });
      if (!labeled) {
        detail::log().warn("test corpus is not annotated; skipping evaluation");
        return;
      }
      std::vector<bool> predicted(test_cands.size(), false), gold;
      // Duplicates of a kept prediction carry the same token set, so they count as predicted too.
      std::set<std::pair<std::size_t, std::vector<int>>> kept;
      for (const auto& p : preds) kept.emplace(p.sent_index, p.token_ids);
      for (std::size_t i = 0; i < test_cands.size(); ++i) {
        predicted[i] = kept.count({test_cands[i].sent_index, test_cands[i].component_ids}) > 0;
        gold.push_back(test_cands[i].label == Label::Positive);
      }
      reports.push_back(evaluate_candidates(predicted, gold));
      for (auto scope : {Scope::Seen, Scope::All, Scope::Variant})
        reports.push_back(evaluate_mwe(preds, test, lexicon, scope));
      for (auto& r : evaluate_by_category(preds, test, lexicon, Scope::Seen)) reports.push_back(std::move(r));
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : reports) arr.push_back(r.to_json());
      write_json_file(out("evaluation.json"), {{"fingerprint", fp}, {"reports", arr}});
      write_text_file(out("evaluation.txt"), "# fingerprint " + fp + "\n" + format_reports(reports));
    });
  }

  std::ostringstream table;
  char line[200];
  table << "# fingerprint " << fp << '\n';
  std::snprintf(line, sizeof line, "%-8s %4s %-6s %7s %7s %7s %7s\n", "method", "k", "clf", "P", "R", "F", "sigma");
  table << line;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : result.cells) {
    const auto& t = c.tuning;
    std::snprintf(line, sizeof line, "%-8s %4zu %-6s %7.3f %7.3f %7.3f %7.3f\n", upper(to_string(c.cell.method)).c_str(),
                  t.best_k, upper(to_string(c.cell.classifier)).c_str(), t.mean_precision, t.mean_recall, t.mean_f1,
                  t.sigma);
    table << line;
    cells.push_back({{"method", to_string(c.cell.method)},
                     {"classifier", to_string(c.cell.classifier)},
                     {"best_k", t.best_k},
                     {"selected_features", t.selected_features},
                     {"precision", t.mean_precision},
                     {"recall", t.mean_recall},
                     {"f1", t.mean_f1},
                     {"sigma", t.sigma}});
  }
  table << "final " << upper(to_string(result.final_cell.method)) << " + "
        << upper(to_string(result.final_cell.classifier)) << " (k=" << final_it->tuning.best_k << ")\n";
  nlohmann::json summary = {{"fingerprint", fp},
                            {"cells", cells},
                            {"final",
                             {{"method", to_string(result.final_cell.method)},
                              {"classifier", to_string(result.final_cell.classifier)},
                              {"selected_features", final_it->tuning.selected_features}}}};
  if (!reports.empty()) {
    table << '\n' << format_reports(reports);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    summary["test"] = arr;
  }
  result.summary = table.str();
  write_text_file(out("summary.txt"), result.summary);
  write_json_file(out("summary.json"), summary);
  return result;
}

}  // namespace vmwe
