#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "vmwe/extraction.hpp"
#include "vmwe/lexicon.hpp"

namespace vmwe {

enum class FeatureKind { Absolute, Relative };

/// Kind from the name prefix ("ABS_" or "REL_").
FeatureKind feature_kind(std::string_view name);

/// UPOS tags with a per-tag relative insertion feature.
std::span<const std::string_view> insertion_pos_tags();

/// Categorical value for absolute features, truth value for relative ones.
using FeatureValue = std::variant<std::string, bool>;

/// Sparse description of one candidate: absent features are not applicable.
struct FeatureVector {
  std::map<std::string, FeatureValue> values;

  bool operator==(const FeatureVector&) const = default;
};

/// String form used for (feature, value) pairs: ABS values verbatim,
/// REL values "true"/"false".
std::string value_string(const FeatureValue& v);

nlohmann::json features_to_json(const FeatureVector& v);
FeatureVector features_from_json(const nlohmann::json& j);

/// Throws ValidationError if the candidate's type is missing from the
/// lexicon or has no attested occurrences.
FeatureVector compute_features(const Candidate& candidate, const Lexicon& lexicon);

/// Pairs that count as activated: every ABS value and every true REL value.
std::vector<std::pair<std::string, std::string>> activated_pairs(const FeatureVector& v);

struct Column {
  std::string feature;
  std::string value;  // "true" for REL columns

  auto operator<=>(const Column&) const = default;
  std::string name() const;  // "feature=value" or the REL feature name
};

/// Binary column per activated (feature, value) pair, in sorted order.
class ColumnDictionary {
 public:
  ColumnDictionary() = default;
  /// Columns for pairs activated at least once; `selected` restricts features.
  static ColumnDictionary build(std::span<const FeatureVector> vectors,
                                const std::vector<std::string>* selected = nullptr);

  std::size_t size() const noexcept { return columns_.size(); }
  const Column& column(std::size_t i) const { return columns_.at(i); }
  std::span<const Column> columns() const noexcept { return columns_; }
  std::optional<std::size_t> find(const std::string& feature, const std::string& value) const;
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }
  /// Feature names in column order, without duplicates.
  std::vector<std::string> features() const;

  /// Active column indices, ascending. Unseen values activate nothing.
  std::vector<std::uint32_t> encode(const FeatureVector& v) const;
  /// (feature, value) pairs of active columns.
  std::vector<Column> decode(std::span<const std::uint32_t> row) const;

  nlohmann::json to_json() const;
  static ColumnDictionary from_json(const nlohmann::json& j);

 private:
  explicit ColumnDictionary(std::vector<Column> columns);

  std::vector<Column> columns_;
  std::map<Column, std::size_t> index_;
  std::uint64_t fingerprint_ = 0;
};

/// Sparse 0/1 matrix tied to the dictionary that produced it.
struct EncodedMatrix {
  std::uint64_t dictionary_fingerprint = 0;
  std::size_t num_columns = 0;
  std::vector<std::vector<std::uint32_t>> rows;

  std::size_t num_rows() const noexcept { return rows.size(); }
};

EncodedMatrix encode_with(const ColumnDictionary& dictionary, std::span<const FeatureVector> vectors);

std::pair<EncodedMatrix, ColumnDictionary> encode(std::span<const FeatureVector> vectors,
                                                  const std::vector<std::string>* selected = nullptr);

}  // namespace vmwe
