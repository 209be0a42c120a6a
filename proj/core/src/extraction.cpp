#include "vmwe/extraction.hpp"

#include <algorithm>
#include <set>

#include "vmwe/dependency.hpp"
#include "vmwe/error.hpp"

namespace vmwe {
namespace {

constexpr int kMaxPathLength = 2;

struct Combination {
  std::vector<int> ids;
  int span = 0;
  bool gold = false;
};

/// Visits every k-subset of `pool` (ascending ids) whose lemma and UPOS
/// multisets equal the type's.
class MultisetEnumerator {
 public:
  MultisetEnumerator(const Sentence& s, const VmweType& type, std::size_t limit)
      : sentence_(s), limit_(limit), k_(type.lemmas.size()) {
    for (const auto& l : type.lemmas) ++need_lemma_[l];
    for (const auto& u : type.upos) ++need_upos_[u];
    for (const auto& t : s.tokens)
      if (need_lemma_.count(t.lemma) && need_upos_.count(t.upos)) pool_.push_back(t.id);
  }

  std::vector<std::vector<int>> run() {
    if (pool_.size() >= k_) recurse(0);
    return std::move(out_);
  }
  bool truncated() const { return truncated_; }

 private:
  void recurse(std::size_t from) {
    if (chosen_.size() == k_) {
      if (out_.size() >= limit_) {
        truncated_ = true;
        return;
      }
      out_.push_back(chosen_);
      return;
    }
    for (std::size_t i = from; i + (k_ - chosen_.size()) <= pool_.size(); ++i) {
      if (truncated_) return;
      const auto& t = sentence_.token(pool_[i]);
      auto& nl = need_lemma_[t.lemma];
      auto& nu = need_upos_[t.upos];
      if (nl == 0 || nu == 0) continue;
      --nl;
      --nu;
      chosen_.push_back(t.id);
      recurse(i + 1);
      chosen_.pop_back();
      ++nl;
      ++nu;
    }
  }

  const Sentence& sentence_;
  std::size_t limit_;
  std::size_t k_;
  std::map<std::string, int> need_lemma_;
  std::map<std::string, int> need_upos_;
  std::vector<int> pool_;
  std::vector<int> chosen_;
  std::vector<std::vector<int>> out_;
  bool truncated_ = false;
};

bool overlaps(const std::vector<int>& ids, const std::set<int>& used) {
  return std::any_of(ids.begin(), ids.end(), [&](int id) { return used.count(id) > 0; });
}

}  // namespace

std::string_view to_string(Label l) {
  switch (l) {
    case Label::Positive: return "positive";
    case Label::Negative: return "negative";
    case Label::Unknown: return "unknown";
  }
  return "unknown";
}

Label parse_label(std::string_view s) {
  if (s == "positive") return Label::Positive;
  if (s == "negative") return Label::Negative;
  if (s == "unknown") return Label::Unknown;
  throw ValidationError("unknown label '" + std::string(s) + "'");
}

nlohmann::json ExtractionStats::to_json() const {
  return {{"sentences", sentences},
          {"skipped_unparsed", skipped_unparsed},
          {"multiset_matches", multiset_matches},
          {"dropped_insertion", dropped_insertion},
          {"dropped_connectivity", dropped_connectivity},
          {"dropped_cap", dropped_cap},
          {"dropped_overlap", dropped_overlap},
          {"enumeration_truncated", enumeration_truncated},
          {"emitted", emitted}};
}

bool is_function_pos(std::string_view upos) {
  static constexpr std::string_view kFunction[] = {"ADP", "AUX", "CCONJ", "DET", "PART", "PRON", "SCONJ"};
  return std::find(std::begin(kFunction), std::end(kFunction), upos) != std::end(kFunction);
}

std::optional<std::pair<int, int>> constrained_pair(const Sentence& sentence, std::span<const int> ids) {
  if (ids.size() == 2) return std::pair{ids[0], ids[1]};
  if (ids.size() < 2) return std::nullopt;
  std::optional<int> verb, noun;
  int verbs = 0, nouns = 0;
  for (int id : ids) {
    const auto& upos = sentence.token(id).upos;
    if (upos == "VERB") {
      ++verbs;
      verb = id;
    } else if (upos == "NOUN") {
      ++nouns;
      noun = id;
    } else if (!is_function_pos(upos)) {
      return std::nullopt;
    }
  }
  if (verbs == 1 && nouns == 1) return std::pair{*verb, *noun};
  return std::nullopt;
}

CandidateExtractor::CandidateExtractor(const Lexicon& lexicon, ExtractionOptions options)
    : lexicon_(lexicon), options_(options) {}

std::vector<Candidate> CandidateExtractor::extract(const Sentence& sentence, std::size_t sent_index) {
  ++stats_.sentences;
  std::vector<Candidate> out;
  if (!sentence.has_dependencies) {
    ++stats_.skipped_unparsed;
    return out;
  }

  std::set<std::size_t> touched;
  for (const auto& t : sentence.tokens)
    for (auto idx : lexicon_.types_with_lemma(t.lemma)) touched.insert(idx);
  if (touched.empty()) return out;

  const DependencyTree tree(sentence);
  std::set<std::vector<int>> gold;
  if (sentence.annotated)
    for (const auto& g : sentence.gold_vmwes) gold.insert(g.token_ids);

  for (auto idx : touched) {
    const auto& type = lexicon_.types()[idx];
    const int cap = options_.insertion_cap.value_or(type.max_insert_count);
    const int k = static_cast<int>(type.lemmas.size());

    MultisetEnumerator enumerator(sentence, type, options_.enumeration_limit);
    auto matches = enumerator.run();
    if (enumerator.truncated()) ++stats_.enumeration_truncated;

    std::vector<Combination> kept;
    for (auto& ids : matches) {
      ++stats_.multiset_matches;
      const int span = ids.back() - ids.front() + 1;
      if (span - k > cap) {
        ++stats_.dropped_insertion;
        continue;
      }
      if (const auto pair = constrained_pair(sentence, ids)) {
        const int d = tree.distance(pair->first, pair->second);
        if (d < 0 || d > kMaxPathLength) {
          ++stats_.dropped_connectivity;
          continue;
        }
      }
      const bool is_gold = gold.count(ids) > 0;
      kept.push_back({std::move(ids), span, is_gold});
    }

    std::stable_sort(kept.begin(), kept.end(), [](const Combination& a, const Combination& b) {
      return a.span != b.span ? a.span < b.span : a.ids < b.ids;
    });

    std::size_t admitted = 0;
    std::set<int> used;
    for (auto& c : kept) {
      if (!c.gold && admitted >= options_.max_combinations) {
        ++stats_.dropped_cap;
        continue;
      }
      ++admitted;
      if (!c.gold && overlaps(c.ids, used)) {
        ++stats_.dropped_overlap;
        continue;
      }
      used.insert(c.ids.begin(), c.ids.end());
      Candidate cand;
      cand.sent_index = sent_index;
      cand.sent_id = sentence.sent_id;
      cand.type_id = type.type_id;
      cand.profile = compute_profile(sentence, c.ids, tree);
      cand.label = !sentence.annotated ? Label::Unknown : (c.gold ? Label::Positive : Label::Negative);
      cand.component_ids = std::move(c.ids);
      out.push_back(std::move(cand));
    }
  }

  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.component_ids != b.component_ids ? a.component_ids < b.component_ids : a.type_id < b.type_id;
  });
  stats_.emitted += out.size();
  return out;
}

std::vector<Candidate> extract_candidates(std::span<const Sentence> corpus, const Lexicon& lexicon,
                                          const ExtractionOptions& options, ExtractionStats* stats) {
  CandidateExtractor extractor(lexicon, options);
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto cands = extractor.extract(corpus[i], i);
    std::move(cands.begin(), cands.end(), std::back_inserter(out));
  }
  if (stats) *stats = extractor.stats();
  return out;
}

nlohmann::json ExtractionReport::to_json() const {
  return {{"candidates", candidates}, {"positive", positive},           {"negative", negative},
          {"gold_in_scope", gold_in_scope}, {"gold_found", gold_found}, {"precision", precision},
          {"recall", recall}};
}

ExtractionReport extraction_report(std::span<const Candidate> candidates, std::span<const Sentence> gold,
                                   const Lexicon& lexicon) {
  ExtractionReport r;
  std::set<std::pair<std::size_t, std::vector<int>>> found;
  for (const auto& c : candidates) {
    if (c.label == Label::Unknown)
      throw ValidationError("extraction report needs labeled candidates; use unknown-label mode for unlabeled corpora");
    ++r.candidates;
    if (c.label == Label::Positive) {
      ++r.positive;
      found.emplace(c.sent_index, c.component_ids);
    } else {
      ++r.negative;
    }
  }
  for (std::size_t si = 0; si < gold.size(); ++si) {
    const auto& s = gold[si];
    if (!s.annotated) continue;
    for (const auto& g : s.gold_vmwes) {
      if (!lexicon.lookup(g.lemmas, g.upos)) continue;
      ++r.gold_in_scope;
      if (found.count({si, g.token_ids})) ++r.gold_found;
    }
  }
  r.precision = r.candidates ? static_cast<double>(r.positive) / static_cast<double>(r.candidates) : 0.0;
  r.recall = r.gold_in_scope ? static_cast<double>(r.gold_found) / static_cast<double>(r.gold_in_scope) : 0.0;
  return r;
}

}  // namespace vmwe
