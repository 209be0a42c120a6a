#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "vmwe/extraction.hpp"
#include "vmwe/features.hpp"

namespace vmwe {

nlohmann::json candidate_to_json(const Candidate& c, const FeatureVector* features = nullptr);
/// `features` receives the "features" object when present.
Candidate candidate_from_json(const nlohmann::json& j, FeatureVector* features = nullptr);

/// Contents of a candidate JSONL file.
struct CandidateSet {
  std::string fingerprint;
  std::vector<Candidate> candidates;
  std::vector<FeatureVector> features;  // empty, or one per candidate

  bool has_features() const noexcept { return !candidates.empty() && features.size() == candidates.size(); }
  std::vector<bool> positive_labels() const;  // throws if any label is unknown
};

/// Header line first, then one object per candidate. `features` is empty or
/// parallel to `candidates`.
void write_candidates(std::ostream& out, std::span<const Candidate> candidates,
                      std::span<const FeatureVector> features, const std::string& fingerprint);
CandidateSet read_candidates(std::istream& in);

void write_candidates_file(const std::string& path, std::span<const Candidate> candidates,
                           std::span<const FeatureVector> features, const std::string& fingerprint);
CandidateSet read_candidates_file(const std::string& path);

/// Binary feature matrix as read back from TSV.
struct FeatureTable {
  std::string fingerprint;
  ColumnDictionary dictionary;
  EncodedMatrix matrix;
  std::vector<Label> labels;

  std::vector<bool> positive_labels() const;  // throws if any label is unknown
};

/// A comment line with the fingerprints, a header of column names, then one
/// 0/1 row per candidate preceded by its label (1, 0 or ?).
void write_feature_tsv(std::ostream& out, const EncodedMatrix& matrix, const ColumnDictionary& dictionary,
                       std::span<const Label> labels, const std::string& fingerprint);
FeatureTable read_feature_tsv(std::istream& in);
FeatureTable read_feature_tsv_file(const std::string& path);

nlohmann::json read_json_file(const std::string& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace vmwe
