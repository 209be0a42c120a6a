#include "vmwe/lexicon.hpp"

#include <algorithm>
#include <array>

#include "log.hpp"
#include "vmwe/error.hpp"

namespace vmwe {
namespace {

constexpr char kSep = '\t';

std::string join(std::span<const std::string> items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string type_key(std::span<const std::string> lemmas, std::span<const std::string> upos) {
  return multiset_key(lemmas) + '\x1e' + multiset_key(upos);
}

std::string canonical_morph(const Token& t) {
  if (t.morph_feats.empty()) return "_";
  std::vector<std::string> feats = t.morph_feats;
  std::sort(feats.begin(), feats.end());
  return join(feats, "|");
}

template <typename Counts>
Category majority(const Counts& counts) {
  Category best = Category::Other;
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > best_count) {
      best_count = counts[i];
      best = static_cast<Category>(i);
    }
  }
  return best;
}

using CategoryCounts = std::array<std::size_t, 5>;

}  // namespace

std::string_view to_string(Connection c) {
  switch (c) {
    case Connection::Direct: return "direct";
    case Connection::Quasi: return "quasi";
    case Connection::None: return "none";
  }
  return "none";
}

Connection parse_connection(std::string_view s) {
  if (s == "direct") return Connection::Direct;
  if (s == "quasi") return Connection::Quasi;
  if (s == "none") return Connection::None;
  throw ValidationError("unknown connection '" + std::string(s) + "'");
}

Connection connection_for_distance(int distance) {
  if (distance == 1) return Connection::Direct;
  if (distance == 2) return Connection::Quasi;
  return Connection::None;
}

std::string bucket(int value) {
  return value >= kInsertionCap ? std::to_string(kInsertionCap) + "+" : std::to_string(value);
}

std::string multiset_key(std::span<const std::string> items) {
  std::vector<std::string> sorted(items.begin(), items.end());
  std::sort(sorted.begin(), sorted.end());
  return join(sorted, std::string_view(&kSep, 1));
}

std::string lemma_set_string(std::span<const std::string> sorted_lemmas) {
  return join(sorted_lemmas, ";");
}

std::vector<std::string> assign_roles(const Sentence& sentence, std::span<const int> ids) {
  std::vector<std::string> roles;
  std::map<std::string, int> seen;
  for (int id : ids) {
    const auto& upos = sentence.token(id).upos;
    const int n = ++seen[upos];
    roles.push_back(n == 1 ? upos : upos + "#" + std::to_string(n));
  }
  return roles;
}

OccurrenceProfile compute_profile(const Sentence& sentence, std::span<const int> ids,
                                  const DependencyTree& tree) {
  OccurrenceProfile p;
  const auto roles = assign_roles(sentence, ids);
  const auto is_component = [&](int id) { return std::find(ids.begin(), ids.end(), id) != ids.end(); };

  const int lo = *std::min_element(ids.begin(), ids.end());
  const int hi = *std::max_element(ids.begin(), ids.end());
  for (int id = lo + 1; id < hi; ++id) {
    if (is_component(id)) continue;
    const auto& upos = sentence.token(id).upos;
    p.insert_pos_sequence.push_back(upos);
    auto& c = p.insert_pos_counts[upos];
    c = std::min(c + 1, kInsertionCap);
  }
  p.insert_count = static_cast<int>(p.insert_pos_sequence.size());

  if (ids.size() < 2) {
    p.syntactic_distance = 0;
  } else {
    int best = -1;
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const int d = tree.distance(ids[i], ids[j]);
        if (d >= 0 && (best < 0 || d < best)) best = d;
      }
    p.syntactic_distance = best;
  }
  p.connection = ids.size() < 2 ? Connection::Direct : connection_for_distance(p.syntactic_distance);

  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& t = sentence.token(ids[i]);
    std::vector<std::string> labels;
    for (int dep : tree.dependents(t.id))
      if (!is_component(dep)) labels.push_back(sentence.token(dep).deprel);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    p.outgoing_deprels[roles[i]] = std::move(labels);
    p.lemma_by_role[roles[i]] = t.lemma;
    p.morph_by_role[roles[i]] = canonical_morph(t);
    p.surface_forms.push_back(t.form);
  }
  return p;
}

nlohmann::json profile_to_json(const OccurrenceProfile& p) {
  return {
      {"insert_pos_sequence", p.insert_pos_sequence},
      {"insert_count", p.insert_count},
      {"insert_pos_counts", p.insert_pos_counts},
      {"syntactic_distance", p.syntactic_distance},
      {"connection", to_string(p.connection)},
      {"outgoing_deprels", p.outgoing_deprels},
      {"lemma_by_role", p.lemma_by_role},
      {"morph_by_role", p.morph_by_role},
      {"surface_forms", p.surface_forms},
  };
}

OccurrenceProfile profile_from_json(const nlohmann::json& j) {
  OccurrenceProfile p;
  j.at("insert_pos_sequence").get_to(p.insert_pos_sequence);
  j.at("insert_count").get_to(p.insert_count);
  j.at("insert_pos_counts").get_to(p.insert_pos_counts);
  j.at("syntactic_distance").get_to(p.syntactic_distance);
  p.connection = parse_connection(j.at("connection").get<std::string>());
  j.at("outgoing_deprels").get_to(p.outgoing_deprels);
  j.at("lemma_by_role").get_to(p.lemma_by_role);
  j.at("morph_by_role").get_to(p.morph_by_role);
  j.at("surface_forms").get_to(p.surface_forms);
  return p;
}

const VmweType* Lexicon::lookup(std::span<const std::string> lemmas,
                                std::span<const std::string> upos) const {
  if (lemmas.size() != upos.size()) return nullptr;
  const auto it = by_key_.find(type_key(lemmas, upos));
  return it == by_key_.end() ? nullptr : &types_[it->second];
}

const VmweType* Lexicon::find(std::string_view type_id) const {
  const auto it = by_id_.find(std::string(type_id));
  return it == by_id_.end() ? nullptr : &types_[it->second];
}

const SeenEntry* Lexicon::seen(std::span<const std::string> lemmas) const {
  const auto it = seen_.find(multiset_key(lemmas));
  return it == seen_.end() ? nullptr : &it->second;
}

std::span<const std::size_t> Lexicon::types_with_lemma(const std::string& lemma) const {
  const auto it = by_lemma_.find(lemma);
  if (it == by_lemma_.end()) return {};
  return it->second;
}

void Lexicon::reindex() {
  by_key_.clear();
  by_id_.clear();
  by_lemma_.clear();
  for (std::size_t i = 0; i < types_.size(); ++i) {
    const auto& t = types_[i];
    by_key_.emplace(type_key(t.lemmas, t.upos), i);
    if (!by_id_.emplace(t.type_id, i).second)
      throw ValidationError("duplicate lexicon type id '" + t.type_id + "'");
    std::vector<std::string> lemmas = t.lemmas;
    lemmas.erase(std::unique(lemmas.begin(), lemmas.end()), lemmas.end());
    for (const auto& l : lemmas) by_lemma_[l].push_back(i);
  }
}

nlohmann::json Lexicon::to_json() const {
  nlohmann::json types = nlohmann::json::array();
  for (const auto& t : types_) {
    nlohmann::json occ = nlohmann::json::array();
    for (const auto& o : t.occurrences) occ.push_back(profile_to_json(o));
    types.push_back({{"type_id", t.type_id},
                     {"lemmas", t.lemmas},
                     {"upos", t.upos},
                     {"category", to_string(t.category)},
                     {"max_insert_count", t.max_insert_count},
                     {"train_count", t.train_count()},
                     {"occurrences", std::move(occ)}});
  }
  nlohmann::json seen = nlohmann::json::array();
  for (const auto& [key, e] : seen_) {
    std::vector<std::string> lemmas;
    std::size_t start = 0;
    while (true) {
      const auto pos = key.find(kSep, start);
      lemmas.push_back(key.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    seen.push_back({{"lemmas", lemmas},
                    {"category", to_string(e.category)},
                    {"count", e.count},
                    {"surface_forms", e.surface_forms}});
  }
  return {{"format", "vmwe-lexicon"},
          {"version", kFormatVersion},
          {"min_count", min_count_},
          {"insertion_cap", kInsertionCap},
          {"types", std::move(types)},
          {"seen", std::move(seen)}};
}

Lexicon Lexicon::from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "vmwe-lexicon") throw ValidationError("not a lexicon file");
    if (j.at("version").get<int>() != kFormatVersion)
      throw ValidationError("unsupported lexicon version " + j.at("version").dump());
    Lexicon lex;
    lex.min_count_ = j.at("min_count").get<int>();
    for (const auto& jt : j.at("types")) {
      VmweType t;
      jt.at("type_id").get_to(t.type_id);
      jt.at("lemmas").get_to(t.lemmas);
      jt.at("upos").get_to(t.upos);
      t.category = parse_category(jt.at("category").get<std::string>());
      jt.at("max_insert_count").get_to(t.max_insert_count);
      for (const auto& o : jt.at("occurrences")) t.occurrences.push_back(profile_from_json(o));
      lex.types_.push_back(std::move(t));
    }
    for (const auto& js : j.at("seen")) {
      SeenEntry e;
      e.category = parse_category(js.at("category").get<std::string>());
      js.at("count").get_to(e.count);
      js.at("surface_forms").get_to(e.surface_forms);
      lex.seen_.emplace(multiset_key(js.at("lemmas").get<std::vector<std::string>>()), std::move(e));
    }
    lex.reindex();
    return lex;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed lexicon: ") + e.what());
  }
}

Lexicon Lexicon::restricted_to(std::span<const std::string> type_ids) const {
  Lexicon out;
  out.min_count_ = min_count_;
  out.seen_ = seen_;
  for (const auto& t : types_)
    if (std::find(type_ids.begin(), type_ids.end(), t.type_id) != type_ids.end()) out.types_.push_back(t);
  out.reindex();
  return out;
}

Lexicon build_lexicon(std::span<const Sentence> train, int min_count, LexiconStats* stats) {
  struct Group {
    std::vector<std::string> lemmas, upos;
    CategoryCounts categories{};
    std::vector<OccurrenceProfile> occurrences;
  };
  struct SeenGroup {
    CategoryCounts categories{};
    std::size_t count = 0;
    std::vector<std::string> surfaces;
  };

  LexiconStats local;
  std::map<std::string, Group> groups;
  std::map<std::string, SeenGroup> seen;

  for (const auto& s : train) {
    if (!s.annotated || s.gold_vmwes.empty()) continue;
    std::optional<DependencyTree> tree;
    if (s.has_dependencies) tree.emplace(s);
    for (const auto& g : s.gold_vmwes) {
      ++local.gold_total;
      std::string surface;
      for (int id : g.token_ids) {
        if (!surface.empty()) surface += ' ';
        surface += s.token(id).form;
      }
      auto& sg = seen[multiset_key(g.lemmas)];
      ++sg.count;
      ++sg.categories[static_cast<std::size_t>(g.category)];
      sg.surfaces.push_back(std::move(surface));

      if (!tree) {
        ++local.skipped_unparsed;
        detail::log().warn("skipping VMWE in unparsed sentence {}", s.sent_id);
        continue;
      }
      auto& grp = groups[type_key(g.lemmas, g.upos)];
      grp.lemmas = g.lemmas;
      grp.upos = g.upos;
      ++grp.categories[static_cast<std::size_t>(g.category)];
      grp.occurrences.push_back(compute_profile(s, g.token_ids, *tree));
    }
  }

  Lexicon lex;
  lex.min_count_ = min_count;
  local.types_total = groups.size();
  std::map<std::string, int> id_uses;
  for (auto& [key, grp] : groups) {
    if (static_cast<int>(grp.occurrences.size()) < min_count) continue;
    VmweType t;
    t.type_id = join(grp.lemmas, "+") + "/" + join(grp.upos, "+");
    if (const int n = id_uses[t.type_id]++; n > 0) t.type_id += "#" + std::to_string(n + 1);
    t.lemmas = std::move(grp.lemmas);
    t.upos = std::move(grp.upos);
    t.category = majority(grp.categories);
    for (const auto& o : grp.occurrences) t.max_insert_count = std::max(t.max_insert_count, o.insert_count);
    t.occurrences = std::move(grp.occurrences);
    local.gold_retained += t.occurrences.size();
    lex.types_.push_back(std::move(t));
  }
  for (auto& [key, sg] : seen) {
    std::sort(sg.surfaces.begin(), sg.surfaces.end());
    sg.surfaces.erase(std::unique(sg.surfaces.begin(), sg.surfaces.end()), sg.surfaces.end());
    lex.seen_.emplace(key, SeenEntry{majority(sg.categories), sg.count, std::move(sg.surfaces)});
  }
  lex.reindex();
  if (stats) *stats = local;
  return lex;
}

}  // namespace vmwe
