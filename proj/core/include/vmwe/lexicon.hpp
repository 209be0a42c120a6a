#pragma once

#include <cstddef>
#include <map>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vmwe/corpus.hpp"
#include "vmwe/dependency.hpp"

namespace vmwe {

enum class Connection { Direct, Quasi, None };

std::string_view to_string(Connection c);
Connection parse_connection(std::string_view s);
/// Path length 1 is a direct link, 2 a link through one intermediate node.
Connection connection_for_distance(int distance);

inline constexpr int kInsertionCap = 5;

/// "0".."4" and "5+" for values at or above the cap.
std::string bucket(int value);

/// Morphosyntactic surface profile of a set of components within a sentence.
/// Attested occurrences and extracted candidates share this shape, so relative
/// features reduce to equality tests between two profiles.
struct OccurrenceProfile {
  std::vector<std::string> insert_pos_sequence;  // UPOS strictly between the outer components
  int insert_count = 0;                          // uncapped
  std::map<std::string, int> insert_pos_counts;  // per UPOS, capped at kInsertionCap
  int syntactic_distance = 0;
  Connection connection = Connection::None;
  std::map<std::string, std::vector<std::string>> outgoing_deprels;  // role -> sorted set
  std::map<std::string, std::string> lemma_by_role;
  std::map<std::string, std::string> morph_by_role;  // canonical "k=v|k=v", "_" if none
  std::vector<std::string> surface_forms;            // component forms in token order

  bool operator==(const OccurrenceProfile&) const = default;
};

/// Role keys for components (ids ascending): the UPOS, with "#2", "#3"...
/// appended to repeated tags in linear order.
std::vector<std::string> assign_roles(const Sentence& sentence, std::span<const int> ids);

OccurrenceProfile compute_profile(const Sentence& sentence, std::span<const int> ids,
                                  const DependencyTree& tree);

nlohmann::json profile_to_json(const OccurrenceProfile& p);
OccurrenceProfile profile_from_json(const nlohmann::json& j);

struct VmweType {
  std::string type_id;
  std::vector<std::string> lemmas;  // sorted multiset
  std::vector<std::string> upos;    // sorted multiset
  Category category = Category::Other;
  std::vector<OccurrenceProfile> occurrences;
  int max_insert_count = 0;  // largest uncapped insertion count among occurrences

  std::size_t train_count() const { return occurrences.size(); }
};

/// Training evidence for the seen-in-train filter, keyed by lemma multiset only.
struct SeenEntry {
  Category category = Category::Other;
  std::size_t count = 0;
  std::vector<std::string> surface_forms;  // sorted, unique; forms joined by ' '
};

struct LexiconStats {
  std::size_t gold_total = 0;
  std::size_t gold_retained = 0;
  std::size_t skipped_unparsed = 0;
  std::size_t types_total = 0;
};

/// Joins a multiset (sorted copy) with a separator that cannot occur in a
/// CoNLL-U field.
std::string multiset_key(std::span<const std::string> items);
std::string lemma_set_string(std::span<const std::string> sorted_lemmas);

class Lexicon {
 public:
  static constexpr int kFormatVersion = 1;

  Lexicon() = default;

  int min_count() const noexcept { return min_count_; }
  std::span<const VmweType> types() const noexcept { return types_; }
  bool empty() const noexcept { return types_.empty(); }

  /// Exact multiset equality on both keys. Inputs need not be sorted.
  const VmweType* lookup(std::span<const std::string> lemmas, std::span<const std::string> upos) const;
  const VmweType* find(std::string_view type_id) const;
  /// Seen-in-train entry for a lemma multiset (annotated at least once).
  const SeenEntry* seen(std::span<const std::string> lemmas) const;
  const std::map<std::string, SeenEntry>& seen_index() const noexcept { return seen_; }

  /// Indices of types having a component with this lemma.
  std::span<const std::size_t> types_with_lemma(const std::string& lemma) const;

  nlohmann::json to_json() const;
  static Lexicon from_json(const nlohmann::json& j);

  /// Keeps only the listed types (used by stratified sampling).
  Lexicon restricted_to(std::span<const std::string> type_ids) const;

 private:
  friend Lexicon build_lexicon(std::span<const Sentence>, int, LexiconStats*);
  void reindex();

  int min_count_ = 2;
  std::vector<VmweType> types_;
  std::map<std::string, SeenEntry> seen_;
  std::unordered_map<std::string, std::size_t> by_key_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_lemma_;
};

/// One type per distinct (lemma multiset, UPOS multiset) annotated at least
/// `min_count` times in parsed sentences.
Lexicon build_lexicon(std::span<const Sentence> train, int min_count = 2, LexiconStats* stats = nullptr);

}  // namespace vmwe
