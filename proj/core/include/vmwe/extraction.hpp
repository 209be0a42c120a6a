#pragma once

#include <cstddef>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vmwe/corpus.hpp"
#include "vmwe/lexicon.hpp"

namespace vmwe {

enum class Label { Positive, Negative, Unknown };

std::string_view to_string(Label l);
Label parse_label(std::string_view s);

struct Candidate {
  std::size_t sent_index = 0;
  std::string sent_id;
  std::vector<int> component_ids;  // ascending
  std::string type_id;
  OccurrenceProfile profile;
  Label label = Label::Unknown;
};

struct ExtractionOptions {
  /// Per type and sentence; smallest linear spans win.
  std::size_t max_combinations = 64;
  /// Hard bound on multiset-matching combinations visited per type and sentence.
  std::size_t enumeration_limit = 100000;
  /// Replaces every type's attested maximum insertion count when set.
  std::optional<int> insertion_cap;
};

struct ExtractionStats {
  std::size_t sentences = 0;
  std::size_t skipped_unparsed = 0;
  std::size_t multiset_matches = 0;
  std::size_t dropped_insertion = 0;
  std::size_t dropped_connectivity = 0;
  std::size_t dropped_cap = 0;
  std::size_t dropped_overlap = 0;
  std::size_t enumeration_truncated = 0;
  std::size_t emitted = 0;

  nlohmann::json to_json() const;
};

/// UPOS tags treated as function words by the connectivity rule.
bool is_function_pos(std::string_view upos);

/// The component pair the connectivity rule constrains, if any: both
/// components of a two-component candidate, or the verb and the noun when
/// they are the only content words of a longer one.
std::optional<std::pair<int, int>> constrained_pair(const Sentence& sentence, std::span<const int> ids);

/// Per-sentence candidate extraction against a lexicon. Stateless apart from
/// the accumulated drop counters, so one extractor can stream a corpus.
class CandidateExtractor {
 public:
  explicit CandidateExtractor(const Lexicon& lexicon, ExtractionOptions options = {});

  std::vector<Candidate> extract(const Sentence& sentence, std::size_t sent_index);
  const ExtractionStats& stats() const noexcept { return stats_; }

 private:
  const Lexicon& lexicon_;
  ExtractionOptions options_;
  ExtractionStats stats_;
};

std::vector<Candidate> extract_candidates(std::span<const Sentence> corpus, const Lexicon& lexicon,
                                          const ExtractionOptions& options = {},
                                          ExtractionStats* stats = nullptr);

struct ExtractionReport {
  std::size_t candidates = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t gold_in_scope = 0;  // gold VMWEs whose type is in the lexicon
  std::size_t gold_found = 0;
  double precision = 0.0;
  double recall = 0.0;

  nlohmann::json to_json() const;
};

/// Throws ValidationError if any candidate is unlabeled.
ExtractionReport extraction_report(std::span<const Candidate> candidates, std::span<const Sentence> gold,
                                   const Lexicon& lexicon);

}  // namespace vmwe
