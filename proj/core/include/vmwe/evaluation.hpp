#pragma once

#include <cstddef>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmwe/corpus.hpp"
#include "vmwe/extraction.hpp"
#include "vmwe/lexicon.hpp"

namespace vmwe {

enum class Granularity { Candidate, Mwe };
enum class Scope { All, Seen, Variant, Category };

std::string_view to_string(Scope s);
/// "all", "seen", "variant" or "category".
Scope parse_scope(std::string_view s);

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct EvalReport {
  Granularity granularity = Granularity::Mwe;
  Scope scope = Scope::All;
  std::optional<Category> category;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Counts counts;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

/// P/R/F from counts. Empty denominators give 0, except that a run with no
/// positives anywhere (all counts zero) scores 1 on every measure.
EvalReport make_report(Counts counts, Granularity granularity, Scope scope);

/// Binary P/R/F of the positive class. Throws on length mismatch.
EvalReport evaluate_candidates(const std::vector<bool>& predicted, const std::vector<bool>& gold);

/// MWE-level exact-match scoring. A prediction is a true positive when its
/// token set equals a gold VMWE of the same sentence. Seen scope keeps gold
/// VMWEs whose lemma multiset was annotated at least once in training;
/// variant scope further requires a surface form never seen in training.
/// Predictions matching out-of-scope gold are ignored, unmatched ones are
/// scoped by their own lemmas and forms. `category`, when set, restricts to
/// that category (of the matched gold, else of the lexicon entry).
EvalReport evaluate_mwe(std::span<const PredictedVmwe> predictions, std::span<const Sentence> gold,
                        const Lexicon& lexicon, Scope scope, std::optional<Category> category = std::nullopt);

/// One report per category in kCategories, on top of `base` scope.
std::vector<EvalReport> evaluate_by_category(std::span<const PredictedVmwe> predictions,
                                             std::span<const Sentence> gold, const Lexicon& lexicon,
                                             Scope base = Scope::Seen);

/// Fixed-width table of several reports.
std::string format_reports(std::span<const EvalReport> reports);

}  // namespace vmwe
