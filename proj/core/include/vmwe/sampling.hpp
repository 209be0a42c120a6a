#pragma once

#include <cstddef>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "vmwe/corpus.hpp"
#include "vmwe/extraction.hpp"
#include "vmwe/lexicon.hpp"

namespace vmwe {

enum class Band { High, Median, Low };

std::string_view to_string(Band b);

/// Number of types to draw from each frequency band of one category.
struct Stratum {
  Category category = Category::Other;
  std::size_t high = 0;
  std::size_t median = 0;
  std::size_t low = 0;

  std::size_t total() const noexcept { return high + median + low; }
};

struct StrataConfig {
  std::vector<Stratum> strata;

  /// {"strata": [{"category": "VID", "high": 10, "median": 10, "low": 10}, ...]}
  static StrataConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// A named slice of the external corpus. Sample sizes are balanced across parts.
struct CorpusPart {
  std::string name;
  std::span<const Sentence> sentences;
};

struct SampledType {
  std::string type_id;
  Category category = Category::Other;
  Band band = Band::High;
  std::size_t train_count = 0;
};

struct SampleItem {
  std::size_t part = 0;
  Candidate candidate;
  std::string context;  // sentence forms joined by spaces
};

struct Sample {
  std::vector<SampledType> types;
  std::vector<SampleItem> items;
  std::vector<std::string> warnings;
};

/// Types of a category ordered by decreasing training frequency (type id on
/// ties) and cut into thirds. Picks within a band are evenly spaced.
std::vector<SampledType> select_types(const Lexicon& lexicon, const StrataConfig& strata,
                                      std::vector<std::string>* warnings = nullptr);

/// Extracts the selected types from every part, then keeps the same number
/// of candidates per part, at most `cap` in total.
Sample sample_external(const Lexicon& lexicon, std::span<const CorpusPart> parts, const StrataConfig& strata,
                       std::size_t cap, const ExtractionOptions& options = {});

/// Header line, then one annotation-ready record per item.
void write_sample(std::ostream& out, const Sample& sample, std::span<const CorpusPart> parts,
                  const std::string& fingerprint);

}  // namespace vmwe
