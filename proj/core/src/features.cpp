#include "vmwe/features.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "vmwe/error.hpp"
#include "vmwe/fingerprint.hpp"

namespace vmwe {
namespace {

constexpr std::array<std::string_view, 17> kInsertTags = {
    "ADP", "ADV", "ADJ", "CCONJ", "DET", "NOUN", "NUM", "PRON", "PUNCT",
    "SCONJ", "VERB", "AUX", "PART", "PROPN", "INTJ", "SYM", "X"};

std::string join(const std::vector<std::string>& items, std::string_view sep, std::string_view empty) {
  if (items.empty()) return std::string(empty);
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

int count_of(const OccurrenceProfile& p, std::string_view tag) {
  const auto it = p.insert_pos_counts.find(std::string(tag));
  return it == p.insert_pos_counts.end() ? 0 : it->second;
}

template <typename Pred>
bool any_of(const std::vector<OccurrenceProfile>& occ, Pred pred) {
  return std::any_of(occ.begin(), occ.end(), pred);
}

template <typename Map>
bool same_entry(const Map& a, const Map& b, const std::string& key) {
  const auto ia = a.find(key);
  const auto ib = b.find(key);
  return ia != a.end() && ib != b.end() && ia->second == ib->second;
}

}  // namespace

FeatureKind feature_kind(std::string_view name) {
  if (name.starts_with("ABS_")) return FeatureKind::Absolute;
  if (name.starts_with("REL_")) return FeatureKind::Relative;
  throw ValidationError("feature name without ABS_/REL_ prefix: '" + std::string(name) + "'");
}

std::span<const std::string_view> insertion_pos_tags() { return kInsertTags; }

std::string value_string(const FeatureValue& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::get<std::string>(v);
}

nlohmann::json features_to_json(const FeatureVector& v) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, value] : v.values) {
    if (const auto* b = std::get_if<bool>(&value))
      j[name] = *b;
    else
      j[name] = std::get<std::string>(value);
  }
  return j;
}

FeatureVector features_from_json(const nlohmann::json& j) {
  FeatureVector v;
  for (const auto& [name, value] : j.items()) {
    const auto kind = feature_kind(name);
    if (kind == FeatureKind::Relative && value.is_boolean())
      v.values.emplace(name, value.get<bool>());
    else if (kind == FeatureKind::Absolute && value.is_string())
      v.values.emplace(name, value.get<std::string>());
    else
      throw ValidationError("feature '" + name + "' has a value of the wrong kind");
  }
  return v;
}

FeatureVector compute_features(const Candidate& candidate, const Lexicon& lexicon) {
  const auto* type = lexicon.find(candidate.type_id);
  if (!type) throw ValidationError("candidate type '" + candidate.type_id + "' not in lexicon");
  if (type->occurrences.empty())
    throw ValidationError("type '" + candidate.type_id + "' has no attested occurrences");

  const auto& c = candidate.profile;
  const auto& occ = type->occurrences;
  FeatureVector v;
  auto& f = v.values;

  f["ABS_LemmaSet"] = lemma_set_string(type->lemmas);
  f["ABS_VMWEcat"] = std::string(to_string(type->category));
  f["ABS_insertSeq"] = join(c.insert_pos_sequence, "-", "EMPTY");
  f["ABS_insertCount"] = bucket(c.insert_count);
  f["ABS_connection"] = std::string(to_string(c.connection));
  f["ABS_syntacticDistance"] = bucket(c.syntactic_distance);

  f["REL_insertSeq"] = any_of(occ, [&](const auto& e) { return e.insert_pos_sequence == c.insert_pos_sequence; });
  for (auto tag : kInsertTags) {
    const int mine = count_of(c, tag);
    f["REL_insert_" + std::string(tag)] = any_of(occ, [&](const auto& e) { return count_of(e, tag) == mine; });
  }
  f["REL_0to5insertions"] =
      any_of(occ, [&](const auto& e) { return bucket(e.insert_count) == bucket(c.insert_count); });
  f["REL_connection"] = any_of(occ, [&](const auto& e) { return e.connection == c.connection; });
  f["REL_SyntacticDistance"] =
      any_of(occ, [&](const auto& e) { return e.syntactic_distance == c.syntactic_distance; });

  for (const auto& [role, lemma] : c.lemma_by_role) {
    f["ABS_lemma_" + role] = lemma;
    f["REL_lemma_" + role] = any_of(occ, [&](const auto& e) { return same_entry(e.lemma_by_role, c.lemma_by_role, role); });
  }
  for (const auto& [role, morph] : c.morph_by_role) {
    f["ABS_morph_" + role] = morph;
    f["REL_morph_" + role] = any_of(occ, [&](const auto& e) { return same_entry(e.morph_by_role, c.morph_by_role, role); });
  }
  for (const auto& [role, labels] : c.outgoing_deprels) {
    f["ABS_depLabels_" + role] = join(labels, "|", "NONE");
    f["REL_depLabels_" + role] =
        any_of(occ, [&](const auto& e) { return same_entry(e.outgoing_deprels, c.outgoing_deprels, role); });
  }
  return v;
}

std::vector<std::pair<std::string, std::string>> activated_pairs(const FeatureVector& v) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, value] : v.values) {
    if (const auto* b = std::get_if<bool>(&value)) {
      if (*b) out.emplace_back(name, "true");
    } else {
      out.emplace_back(name, std::get<std::string>(value));
    }
  }
  return out;
}

std::string Column::name() const {
  return feature_kind(feature) == FeatureKind::Relative ? feature : feature + "=" + value;
}

ColumnDictionary::ColumnDictionary(std::vector<Column> columns) : columns_(std::move(columns)) {
  std::uint64_t h = kFnvOffset;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    index_.emplace(columns_[i], i);
    h = fnv1a64(columns_[i].feature, h);
    h = fnv1a64(std::string_view("\x1f", 1), h);
    h = fnv1a64(columns_[i].value, h);
    h = fnv1a64(std::string_view("\x1e", 1), h);
  }
  fingerprint_ = h;
}

ColumnDictionary ColumnDictionary::build(std::span<const FeatureVector> vectors,
                                         const std::vector<std::string>* selected) {
  std::set<std::string> allowed;
  if (selected) allowed.insert(selected->begin(), selected->end());
  std::set<Column> cols;
  for (const auto& v : vectors)
    for (auto& [feature, value] : activated_pairs(v))
      if (!selected || allowed.count(feature)) cols.insert(Column{feature, value});
  return ColumnDictionary(std::vector<Column>(cols.begin(), cols.end()));
}

std::optional<std::size_t> ColumnDictionary::find(const std::string& feature, const std::string& value) const {
  const auto it = index_.find(Column{feature, value});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ColumnDictionary::features() const {
  std::vector<std::string> out;
  for (const auto& c : columns_)
    if (out.empty() || out.back() != c.feature) out.push_back(c.feature);
  return out;
}

std::vector<std::uint32_t> ColumnDictionary::encode(const FeatureVector& v) const {
  std::vector<std::uint32_t> row;
  for (const auto& [feature, value] : activated_pairs(v))
    if (const auto idx = find(feature, value)) row.push_back(static_cast<std::uint32_t>(*idx));
  std::sort(row.begin(), row.end());
  return row;
}

std::vector<Column> ColumnDictionary::decode(std::span<const std::uint32_t> row) const {
  std::vector<Column> out;
  for (auto idx : row) out.push_back(column(idx));
  return out;
}

nlohmann::json ColumnDictionary::to_json() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns_) cols.push_back({c.feature, c.value});
  return {{"columns", std::move(cols)}, {"fingerprint", to_hex(fingerprint_)}};
}

ColumnDictionary ColumnDictionary::from_json(const nlohmann::json& j) {
  try {
    std::vector<Column> cols;
    for (const auto& c : j.at("columns")) cols.push_back(Column{c.at(0).get<std::string>(), c.at(1).get<std::string>()});
    if (!std::is_sorted(cols.begin(), cols.end()) ||
        std::adjacent_find(cols.begin(), cols.end()) != cols.end())
      throw ValidationError("column dictionary must be sorted and duplicate-free");
    ColumnDictionary d(std::move(cols));
    if (j.contains("fingerprint") && j.at("fingerprint").get<std::string>() != to_hex(d.fingerprint_))
      throw ValidationError("column dictionary fingerprint mismatch");
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed column dictionary: ") + e.what());
  }
}

EncodedMatrix encode_with(const ColumnDictionary& dictionary, std::span<const FeatureVector> vectors) {
  EncodedMatrix m;
  m.dictionary_fingerprint = dictionary.fingerprint();
  m.num_columns = dictionary.size();
  m.rows.reserve(vectors.size());
  for (const auto& v : vectors) m.rows.push_back(dictionary.encode(v));
  return m;
}

std::pair<EncodedMatrix, ColumnDictionary> encode(std::span<const FeatureVector> vectors,
                                                  const std::vector<std::string>* selected) {
  auto dict = ColumnDictionary::build(vectors, selected);
  auto matrix = encode_with(dict, vectors);
  return {std::move(matrix), std::move(dict)};
}

}  // namespace vmwe
