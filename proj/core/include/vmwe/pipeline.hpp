#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vmwe/classifiers.hpp"
#include "vmwe/error.hpp"
#include "vmwe/extraction.hpp"
#include "vmwe/features.hpp"
#include "vmwe/ranking.hpp"
#include "vmwe/tuning.hpp"

namespace vmwe {

/// A pipeline stage failed after its inputs were validated.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct Cell {
  RankingMethod method = RankingMethod::Freq;
  ClassifierKind classifier = ClassifierKind::LinearSvm;
};

/// Declarative run description. Relative paths are resolved against the
/// directory of the config file.
struct PipelineConfig {
  std::string train;
  std::string test;       // optional
  std::string unlabeled;  // optional source for the FREQ ranking
  int min_count = 2;
  std::vector<RankingMethod> methods{kRankingMethods[0], kRankingMethods[1], kRankingMethods[2],
                                     kRankingMethods[3]};
  std::vector<ClassifierKind> classifiers{ClassifierKind::NaiveBayes, ClassifierKind::LinearSvm,
                                          ClassifierKind::DecisionTree};
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  bool shuffle = true;
  std::size_t forest_trees = 10;
  std::optional<int> insertion_cap;
  SvmConfig svm;
  /// Cell used for the final model; the best mean F when unset.
  std::optional<Cell> final_cell;
  std::string output_dir = "run";

  /// Throws ValidationError on unknown keys, bad values or a missing train path.
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::string& path);
  nlohmann::json to_json() const;
  /// FNV-1a of the canonical JSON form, as 16 hex digits.
  std::string fingerprint() const;
};

/// Positive classifications as VMWE predictions; identical token sets keep
/// the highest score.
std::vector<PredictedVmwe> predict_vmwes(const Model& model, std::span<const Candidate> candidates,
                                         std::span<const FeatureVector> features);

/// Comment line carrying a fingerprint, for cupt outputs.
std::string fingerprint_comment(const std::string& fingerprint);

struct CellResult {
  Cell cell;
  TuningResult tuning;
};

struct PipelineResult {
  std::filesystem::path run_dir;
  std::vector<CellResult> cells;
  Cell final_cell;
  std::string summary;  // fixed-width table, also written to summary.txt
};

/// Runs every stage and writes all artifacts into config.output_dir. Stage
/// failures throw StageError; files written before the failure are kept.
PipelineResult run_pipeline(const PipelineConfig& config, std::size_t jobs = 1);

}  // namespace vmwe
