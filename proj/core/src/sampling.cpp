#include "vmwe/sampling.hpp"

#include <algorithm>
#include <ostream>

#include "log.hpp"
#include "vmwe/error.hpp"
#include "vmwe/io.hpp"

namespace vmwe {
namespace {

// `count` indices evenly spread over [0, n).
std::vector<std::size_t> spread(std::size_t n, std::size_t count) {
  std::vector<std::size_t> out;
  count = std::min(count, n);
  for (std::size_t i = 0; i < count; ++i) out.push_back(i * n / count);
  return out;
}

}  // namespace

std::string_view to_string(Band b) {
  switch (b) {
    case Band::High: return "high";
    case Band::Median: return "median";
    case Band::Low: return "low";
  }
  return "high";
}

StrataConfig StrataConfig::from_json(const nlohmann::json& j) {
  StrataConfig cfg;
  try {
    for (const auto& s : j.at("strata")) {
      Stratum st;
      st.category = parse_category(s.at("category").get<std::string>());
      const std::pair<const char*, std::size_t*> bands[] = {{"high", &st.high}, {"median", &st.median}, {"low", &st.low}};
      for (const auto& [key, field] : bands) {
        if (!s.contains(key)) continue;
        if (!s.at(key).is_number_unsigned())
          throw ValidationError(std::string("strata '") + key + "' must be a non-negative integer");
        *field = s.at(key).get<std::size_t>();
      }
      for (const auto& [key, _] : s.items())
        if (key != "category" && key != "high" && key != "median" && key != "low")
          throw ValidationError("unknown strata key '" + key + "'");
      cfg.strata.push_back(st);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed strata config: ") + e.what());
  }
  return cfg;
}

nlohmann::json StrataConfig::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : strata)
    arr.push_back({{"category", to_string(s.category)}, {"high", s.high}, {"median", s.median}, {"low", s.low}});
  return {{"strata", arr}};
}

std::vector<SampledType> select_types(const Lexicon& lexicon, const StrataConfig& strata,
                                      std::vector<std::string>* warnings) {
  std::vector<SampledType> out;
  for (const auto& st : strata.strata) {
    std::vector<const VmweType*> pool;
    for (const auto& t : lexicon.types())
      if (t.category == st.category) pool.push_back(&t);
    std::sort(pool.begin(), pool.end(), [](const VmweType* a, const VmweType* b) {
      if (a->train_count() != b->train_count()) return a->train_count() > b->train_count();
      return a->type_id < b->type_id;
    });
    const std::size_t n = pool.size();
    const std::size_t cut1 = n / 3, cut2 = 2 * n / 3;
    const std::pair<std::size_t, std::size_t> ranges[] = {{0, cut1}, {cut1, cut2}, {cut2, n}};
    const std::size_t wanted[] = {st.high, st.median, st.low};
    for (int b = 0; b < 3; ++b) {
      const auto [lo, hi] = ranges[b];
      const auto band = static_cast<Band>(b);
      if (hi - lo < wanted[b]) {
        std::string msg = std::string(to_string(st.category)) + " " + std::string(to_string(band)) + " band has " +
                          std::to_string(hi - lo) + " type(s), " + std::to_string(wanted[b]) + " requested";
        detail::log().warn("{}", msg);
        if (warnings) warnings->push_back(msg);
      }
      for (auto i : spread(hi - lo, wanted[b])) {
        const auto* t = pool[lo + i];
        out.push_back({t->type_id, t->category, band, t->train_count()});
      }
    }
  }
  return out;
}

Sample sample_external(const Lexicon& lexicon, std::span<const CorpusPart> parts, const StrataConfig& strata,
                       std::size_t cap, const ExtractionOptions& options) {
  Sample sample;
  sample.types = select_types(lexicon, strata, &sample.warnings);
  if (cap == 0 || parts.empty() || sample.types.empty()) return sample;

  std::vector<std::string> ids;
  for (const auto& t : sample.types) ids.push_back(t.type_id);
  const Lexicon restricted = lexicon.restricted_to(ids);

  std::vector<std::vector<Candidate>> per_part;
  for (const auto& part : parts) per_part.push_back(extract_candidates(part.sentences, restricted, options));

  std::size_t per = cap / parts.size();
  for (const auto& c : per_part) per = std::min(per, c.size());
  if (per == 0) {
    sample.warnings.push_back("a corpus part yielded no candidates (or cap below number of parts)");
    detail::log().warn("{}", sample.warnings.back());
  }
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (auto i : spread(per_part[p].size(), per)) {
      auto& c = per_part[p][i];
      std::string context;
      for (const auto& tok : parts[p].sentences[c.sent_index].tokens) {
        if (!context.empty()) context += ' ';
        context += tok.form;
      }
      sample.items.push_back({p, std::move(c), std::move(context)});
    }
  }
  return sample;
}

void write_sample(std::ostream& out, const Sample& sample, std::span<const CorpusPart> parts,
                  const std::string& fingerprint) {
  nlohmann::json types = nlohmann::json::array();
  for (const auto& t : sample.types)
    types.push_back({{"type_id", t.type_id},
                     {"category", to_string(t.category)},
                     {"band", to_string(t.band)},
                     {"train_count", t.train_count}});
  nlohmann::json header = {{"format", "vmwe-sample"},
                           {"version", 1},
                           {"fingerprint", fingerprint},
                           {"count", sample.items.size()},
                           {"types", types},
                           {"warnings", sample.warnings}};
  out << header.dump() << '\n';
  for (const auto& item : sample.items) {
    auto j = candidate_to_json(item.candidate);
    j["part"] = parts[item.part].name;
    j["context"] = item.context;
    j["annotation"] = nullptr;
    out << j.dump() << '\n';
  }
}

}  // namespace vmwe
