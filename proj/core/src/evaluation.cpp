#include "vmwe/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "vmwe/error.hpp"

namespace vmwe {
namespace {

std::string surface_of(const Sentence& s, std::span<const int> ids) {
  std::string out;
  for (int id : ids) {
    if (!out.empty()) out += ' ';
    out += s.token(id).form;
  }
  return out;
}

bool scope_admits(Scope scope, const Lexicon& lexicon, std::span<const std::string> lemmas,
                  const std::string& surface) {
  if (scope == Scope::All) return true;
  const auto* entry = lexicon.seen(lemmas);
  if (!entry) return false;
  if (scope == Scope::Variant)
    return !std::binary_search(entry->surface_forms.begin(), entry->surface_forms.end(), surface);
  return true;
}

}  // namespace

std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::All: return "all";
    case Scope::Seen: return "seen";
    case Scope::Variant: return "variant";
    case Scope::Category: return "category";
  }
  return "all";
}

Scope parse_scope(std::string_view s) {
  if (s == "all") return Scope::All;
  if (s == "seen") return Scope::Seen;
  if (s == "variant") return Scope::Variant;
  if (s == "category") return Scope::Category;
  throw ValidationError("unknown scope '" + std::string(s) + "' (expected all, seen, variant or category)");
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j = {{"granularity", granularity == Granularity::Mwe ? "mwe" : "candidate"},
                      {"scope", to_string(scope)},
                      {"precision", precision},
                      {"recall", recall},
                      {"f1", f1},
                      {"tp", counts.tp},
                      {"fp", counts.fp},
                      {"fn", counts.fn},
                      {"notes", notes}};
  j["category"] = category ? nlohmann::json(std::string(to_string(*category))) : nlohmann::json();
  return j;
}

EvalReport make_report(Counts counts, Granularity granularity, Scope scope) {
  EvalReport r;
  r.granularity = granularity;
  r.scope = scope;
  r.counts = counts;
  if (counts.tp + counts.fp + counts.fn == 0) {
    r.precision = r.recall = r.f1 = 1.0;
    r.notes.push_back("no positives predicted or expected");
    return r;
  }
  const auto tp = static_cast<double>(counts.tp);
  r.precision = counts.tp + counts.fp ? tp / static_cast<double>(counts.tp + counts.fp) : 0.0;
  r.recall = counts.tp + counts.fn ? tp / static_cast<double>(counts.tp + counts.fn) : 0.0;
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

EvalReport evaluate_candidates(const std::vector<bool>& predicted, const std::vector<bool>& gold) {
  if (predicted.size() != gold.size())
    throw ValidationError("prediction count " + std::to_string(predicted.size()) + " does not match gold count " +
                          std::to_string(gold.size()));
  Counts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predicted[i] && gold[i]) ++c.tp;
    else if (predicted[i]) ++c.fp;
    else if (gold[i]) ++c.fn;
  }
  return make_report(c, Granularity::Candidate, Scope::All);
}

EvalReport evaluate_mwe(std::span<const PredictedVmwe> predictions, std::span<const Sentence> gold,
                        const Lexicon& lexicon, Scope scope, std::optional<Category> category) {
  Scope base = scope;
  if (scope == Scope::Category) {
    if (!category) throw ValidationError("category scope needs a category");
    base = Scope::Seen;
  }

  // Gold VMWEs in scope, by (sentence, token set).
  std::set<std::pair<std::size_t, std::vector<int>>> gold_in_scope;
  std::set<std::pair<std::size_t, std::vector<int>>> gold_all;
  for (std::size_t si = 0; si < gold.size(); ++si) {
    const auto& s = gold[si];
    for (const auto& g : s.gold_vmwes) {
      gold_all.emplace(si, g.token_ids);
      if (category && g.category != *category) continue;
      if (scope_admits(base, lexicon, g.lemmas, surface_of(s, g.token_ids))) gold_in_scope.emplace(si, g.token_ids);
    }
  }

  std::set<std::pair<std::size_t, std::vector<int>>> predicted;
  for (const auto& p : predictions) {
    if (p.sent_index >= gold.size())
      throw ValidationError("prediction references unknown sentence '" + p.sent_id + "'");
    const auto& s = gold[p.sent_index];
    if (!p.sent_id.empty() && p.sent_id != s.sent_id)
      throw ValidationError("prediction sent_id '" + p.sent_id + "' does not match gold '" + s.sent_id + "'");
    std::vector<int> ids = p.token_ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id : ids)
      if (!s.valid_id(id)) throw ValidationError("prediction references unknown token in sentence " + s.sent_id);
    if (ids.empty()) throw ValidationError("empty prediction in sentence " + s.sent_id);
    predicted.emplace(p.sent_index, std::move(ids));
  }

  Counts c;
  std::size_t ignored = 0;
  for (const auto& key : predicted) {
    if (gold_in_scope.count(key)) {
      ++c.tp;
      continue;
    }
    if (gold_all.count(key)) {
      ++ignored;
      continue;
    }
    const auto& s = gold[key.first];
    std::vector<std::string> lemmas, upos;
    for (int id : key.second) {
      lemmas.push_back(s.token(id).lemma);
      upos.push_back(s.token(id).upos);
    }
    if (category) {
      Category cat = Category::Other;
      if (const auto* t = lexicon.lookup(lemmas, upos))
        cat = t->category;
      else if (const auto* e = lexicon.seen(lemmas))
        cat = e->category;
      if (cat != *category) {
        ++ignored;
        continue;
      }
    }
    if (scope_admits(base, lexicon, lemmas, surface_of(s, key.second)))
      ++c.fp;
    else
      ++ignored;
  }
  c.fn = gold_in_scope.size() - c.tp;

  auto r = make_report(c, Granularity::Mwe, scope);
  r.category = category;
  if (ignored) r.notes.push_back(std::to_string(ignored) + " prediction(s) outside scope ignored");
  return r;
}

std::vector<EvalReport> evaluate_by_category(std::span<const PredictedVmwe> predictions,
                                             std::span<const Sentence> gold, const Lexicon& lexicon, Scope base) {
  std::vector<EvalReport> out;
  for (auto cat : kCategories) {
    auto r = evaluate_mwe(predictions, gold, lexicon, base, cat);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_reports(std::span<const EvalReport> reports) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %-9s %-8s %8s %8s %8s %7s %7s %7s\n", "level", "scope", "category", "P", "R",
                "F", "TP", "FP", "FN");
  out << line;
  for (const auto& r : reports) {
    const std::string cat = r.category ? std::string(to_string(*r.category)) : "-";
    std::snprintf(line, sizeof line, "%-10s %-9s %-8s %8.4f %8.4f %8.4f %7zu %7zu %7zu\n",
                  r.granularity == Granularity::Mwe ? "mwe" : "candidate", std::string(to_string(r.scope)).c_str(),
                  cat.c_str(), r.precision, r.recall, r.f1, r.counts.tp, r.counts.fp, r.counts.fn);
    out << line;
  }
  return out.str();
}

}  // namespace vmwe
