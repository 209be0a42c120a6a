#include "vmwe/io.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "log.hpp"
#include "vmwe/error.hpp"
#include "vmwe/fingerprint.hpp"

namespace vmwe {

namespace detail {

spdlog::logger& log() {
  static auto logger = [] {
    auto l = spdlog::get("vmwe");
    if (!l) l = spdlog::stderr_color_mt("vmwe");
    return l;
  }();
  return *logger;
}

}  // namespace detail

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

namespace {

constexpr const char* kCandidateFormat = "vmwe-candidates";
constexpr int kCandidateVersion = 1;

std::vector<bool> to_positive(std::span<const Label> labels) {
  std::vector<bool> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == Label::Unknown)
      throw ValidationError("candidate " + std::to_string(i) + " is unlabeled; labeled candidates are required");
    out.push_back(labels[i] == Label::Positive);
  }
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

nlohmann::json candidate_to_json(const Candidate& c, const FeatureVector* features) {
  nlohmann::json j = {{"sent_index", c.sent_index},
                      {"sent_id", c.sent_id},
                      {"token_ids", c.component_ids},
                      {"type_id", c.type_id},
                      {"label", to_string(c.label)},
                      {"profile", profile_to_json(c.profile)}};
  if (features) j["features"] = features_to_json(*features);
  return j;
}

Candidate candidate_from_json(const nlohmann::json& j, FeatureVector* features) {
  Candidate c;
  try {
    c.sent_index = j.at("sent_index").get<std::size_t>();
    c.sent_id = j.at("sent_id").get<std::string>();
    c.component_ids = j.at("token_ids").get<std::vector<int>>();
    c.type_id = j.at("type_id").get<std::string>();
    c.label = parse_label(j.at("label").get<std::string>());
    c.profile = profile_from_json(j.at("profile"));
    if (features && j.contains("features")) *features = features_from_json(j.at("features"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed candidate record: ") + e.what());
  }
  return c;
}

std::vector<bool> CandidateSet::positive_labels() const {
  std::vector<Label> labels;
  labels.reserve(candidates.size());
  for (const auto& c : candidates) labels.push_back(c.label);
  return to_positive(labels);
}

void write_candidates(std::ostream& out, std::span<const Candidate> candidates,
                      std::span<const FeatureVector> features, const std::string& fingerprint) {
  if (!features.empty() && features.size() != candidates.size())
    throw ValidationError("feature vectors do not match candidates");
  nlohmann::json header = {{"format", kCandidateFormat},
                           {"version", kCandidateVersion},
                           {"fingerprint", fingerprint},
                           {"count", candidates.size()},
                           {"features", !features.empty()}};
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < candidates.size(); ++i)
    out << candidate_to_json(candidates[i], features.empty() ? nullptr : &features[i]).dump() << '\n';
}

CandidateSet read_candidates(std::istream& in) {
  CandidateSet set;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  bool with_features = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!header_seen) {
      header_seen = true;
      if (j.is_object() && j.value("format", "") == kCandidateFormat) {
        if (j.value("version", 0) != kCandidateVersion) throw ParseError(lineno, "unsupported candidate file version");
        set.fingerprint = j.value("fingerprint", "");
        with_features = j.value("features", false);
        continue;
      }
    }
    FeatureVector fv;
    try {
      set.candidates.push_back(candidate_from_json(j, with_features ? &fv : nullptr));
    } catch (const ValidationError& e) {
      throw ParseError(lineno, e.what());
    }
    if (with_features) {
      if (!j.contains("features")) throw ParseError(lineno, "missing features object");
      set.features.push_back(std::move(fv));
    }
  }
  return set;
}

void write_candidates_file(const std::string& path, std::span<const Candidate> candidates,
                           std::span<const FeatureVector> features, const std::string& fingerprint) {
  auto out = open_out(path);
  write_candidates(out, candidates, features, fingerprint);
}

CandidateSet read_candidates_file(const std::string& path) {
  auto in = open_in(path);
  return read_candidates(in);
}

std::vector<bool> FeatureTable::positive_labels() const { return to_positive(labels); }

void write_feature_tsv(std::ostream& out, const EncodedMatrix& matrix, const ColumnDictionary& dictionary,
                       std::span<const Label> labels, const std::string& fingerprint) {
  if (matrix.dictionary_fingerprint != dictionary.fingerprint())
    throw ValidationError("matrix was not encoded with this dictionary");
  if (labels.size() != matrix.num_rows()) throw ValidationError("label count does not match matrix rows");
  out << "# vmwe-features fingerprint=" << fingerprint << " dictionary=" << to_hex(dictionary.fingerprint()) << '\n';
  out << "label";
  for (const auto& c : dictionary.columns()) out << '\t' << c.name();
  out << '\n';
  std::string row;
  for (std::size_t r = 0; r < matrix.num_rows(); ++r) {
    row.assign(2 * dictionary.size() + 1, '0');
    row[0] = labels[r] == Label::Positive ? '1' : labels[r] == Label::Negative ? '0' : '?';
    for (std::size_t i = 1; i < row.size(); i += 2) row[i] = '\t';
    for (auto col : matrix.rows[r]) row[2 + 2 * col] = '1';
    out << row << '\n';
  }
}

FeatureTable read_feature_tsv(std::istream& in) {
  FeatureTable t;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  std::string dict_fp;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream words(line.substr(1));
      std::string w;
      while (words >> w) {
        if (w.rfind("fingerprint=", 0) == 0) t.fingerprint = w.substr(12);
        if (w.rfind("dictionary=", 0) == 0) dict_fp = w.substr(11);
      }
      continue;
    }
    auto fields = split_tabs(line);
    if (header.empty()) {
      if (fields.empty() || fields[0] != "label") throw ParseError(lineno, "expected a header starting with 'label'");
      header = fields;
      nlohmann::json cols = nlohmann::json::array();
      for (std::size_t i = 1; i < header.size(); ++i) {
        const auto& name = header[i];
        const auto eq = name.find('=');
        if (eq == std::string::npos)
          cols.push_back({name, "true"});
        else
          cols.push_back({name.substr(0, eq), name.substr(eq + 1)});
      }
      nlohmann::json dj = {{"columns", cols}};
      if (!dict_fp.empty()) dj["fingerprint"] = dict_fp;
      try {
        t.dictionary = ColumnDictionary::from_json(dj);
      } catch (const ValidationError& e) {
        throw ParseError(lineno, e.what());
      }
      t.matrix.dictionary_fingerprint = t.dictionary.fingerprint();
      t.matrix.num_columns = t.dictionary.size();
      continue;
    }
    if (fields.size() != header.size())
      throw ParseError(lineno, "expected " + std::to_string(header.size()) + " fields, found " +
                                   std::to_string(fields.size()));
    if (fields[0] == "1") t.labels.push_back(Label::Positive);
    else if (fields[0] == "0") t.labels.push_back(Label::Negative);
    else if (fields[0] == "?") t.labels.push_back(Label::Unknown);
    else throw ParseError(lineno, "label must be 1, 0 or ?");
    std::vector<std::uint32_t> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] == "1") row.push_back(static_cast<std::uint32_t>(i - 1));
      else if (fields[i] != "0") throw ParseError(lineno, "cells must be 0 or 1");
    }
    t.matrix.rows.push_back(std::move(row));
  }
  if (header.empty()) throw ParseError(lineno, "missing header line");
  return t;
}

FeatureTable read_feature_tsv_file(const std::string& path) {
  auto in = open_in(path);
  return read_feature_tsv(in);
}

nlohmann::json read_json_file(const std::string& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& j) { write_text_file(path, j.dump(2) + "\n"); }

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace vmwe
