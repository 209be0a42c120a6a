#include "vmwe/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "vmwe/error.hpp"

namespace vmwe {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<int> to_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::vector<MweTag> parse_mwe_column(std::string_view col, std::size_t line) {
  std::vector<MweTag> tags;
  if (col == "*" || col == "_") return tags;
  for (auto part : split(col, ';')) {
    MweTag tag;
    const auto colon = part.find(':');
    const auto num = to_int(part.substr(0, colon));
    if (!num || *num < 1) throw ParseError(line, "bad VMWE code '" + std::string(part) + "'");
    tag.index = *num;
    if (colon != std::string_view::npos) {
      const auto cat = part.substr(colon + 1);
      if (cat.empty()) throw ParseError(line, "empty VMWE category");
      tag.category = std::string(cat);
    }
    tags.push_back(std::move(tag));
  }
  return tags;
}

void check_tree(const Sentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  int roots = 0;
  for (const auto& t : s.tokens) {
    if (t.head < 0 || t.head > n)
      throw StructuralError(s.sent_id, "head " + std::to_string(t.head) + " of token " +
                                           std::to_string(t.id) + " out of range");
    if (t.head == 0) ++roots;
  }
  if (n > 0 && roots != 1)
    throw StructuralError(s.sent_id, "expected exactly one root, found " + std::to_string(roots));
  for (const auto& t : s.tokens) {
    int cur = t.id;
    for (int steps = 0; cur != 0; ++steps) {
      if (steps > n) throw StructuralError(s.sent_id, "cyclic head structure");
      cur = s.token(cur).head;
    }
  }
}

void build_gold(Sentence& s) {
  std::map<int, GoldVmwe> by_index;
  for (const auto& t : s.tokens) {
    for (const auto& tag : t.mwe_annotations) {
      auto& g = by_index[tag.index];
      g.token_ids.push_back(t.id);
      if (tag.category && g.raw_category.empty()) g.raw_category = *tag.category;
    }
  }
  for (auto& [index, g] : by_index) {
    std::sort(g.token_ids.begin(), g.token_ids.end());
    g.token_ids.erase(std::unique(g.token_ids.begin(), g.token_ids.end()), g.token_ids.end());
    g.category = normalize_category(g.raw_category);
    for (int id : g.token_ids) {
      g.lemmas.push_back(s.token(id).lemma);
      g.upos.push_back(s.token(id).upos);
    }
    std::sort(g.lemmas.begin(), g.lemmas.end());
    std::sort(g.upos.begin(), g.upos.end());
    s.gold_vmwes.push_back(std::move(g));
  }
}

std::string sent_id_from_comments(const std::vector<std::string>& comments) {
  std::string fallback;
  for (const auto& c : comments) {
    std::string_view v(c);
    v.remove_prefix(1);
    while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) continue;
    auto key = v.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.remove_suffix(1);
    auto value = v.substr(eq + 1);
    while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    while (!value.empty() && value.back() == ' ') value.remove_suffix(1);
    if (key == "sent_id") return std::string(value);
    if (key == "source_sent_id" && fallback.empty()) {
      const auto sp = value.rfind(' ');
      fallback = std::string(sp == std::string_view::npos ? value : value.substr(sp + 1));
    }
  }
  return fallback;
}

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::VID: return "VID";
    case Category::LVC: return "LVC";
    case Category::IRV: return "IRV";
    case Category::MVC: return "MVC";
    case Category::Other: return "OTHER";
  }
  return "OTHER";
}

Category normalize_category(std::string_view raw) {
  const auto coarse = raw.substr(0, raw.find('.'));
  if (coarse == "VID") return Category::VID;
  if (coarse == "LVC") return Category::LVC;
  if (coarse == "IRV") return Category::IRV;
  if (coarse == "MVC") return Category::MVC;
  return Category::Other;
}

Category parse_category(std::string_view name) {
  for (auto c : kCategories)
    if (to_string(c) == name) return c;
  if (name == "OTHER") return Category::Other;
  throw ValidationError("unknown VMWE category '" + std::string(name) + "'");
}

std::optional<Sentence> CuptReader::next() {
  Sentence s;
  std::string line;
  bool any = false;
  bool dependencies = true;
  bool annotated = true;
  std::optional<std::size_t> columns;

  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (any) break;
      continue;
    }
    any = true;
    if (line.front() == '#') {
      s.comments.push_back(line);
      continue;
    }
    const auto cols = split(line, '\t');
    if (cols.size() != 10 && cols.size() != 11)
      throw ParseError(line_, "expected 10 or 11 tab-separated columns, found " +
                                  std::to_string(cols.size()));
    if (columns && *columns != cols.size())
      throw ParseError(line_, "inconsistent column count within sentence");
    columns = cols.size();

    const auto id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
      s.rows.emplace_back(line);
      continue;
    }
    Token t;
    const auto parsed_id = to_int(id);
    if (!parsed_id) throw ParseError(line_, "bad token id '" + std::string(id) + "'");
    t.id = *parsed_id;
    if (t.id != static_cast<int>(s.tokens.size()) + 1)
      throw ParseError(line_, "token ids must be contiguous from 1");
    t.form = cols[1];
    t.lemma = cols[2];
    t.upos = cols[3];
    t.xpos = cols[4];
    t.feats = cols[5];
    if (cols[5] != "_")
      for (auto f : split(cols[5], '|')) t.morph_feats.emplace_back(f);
    if (cols[6] == "_") {
      dependencies = false;
    } else {
      const auto head = to_int(cols[6]);
      if (!head || *head < 0) throw ParseError(line_, "bad head '" + std::string(cols[6]) + "'");
      t.head = *head;
    }
    t.deprel = cols[7];
    t.deps = cols[8];
    t.misc = cols[9];
    if (cols.size() == 11) {
      t.mwe_column = cols[10];
      if (cols[10] == "_") annotated = false;
      t.mwe_annotations = parse_mwe_column(cols[10], line_);
    }
    s.rows.emplace_back(s.tokens.size());
    s.tokens.push_back(std::move(t));
  }
  if (!any) return std::nullopt;

  ++count_;
  s.column_count = columns.value_or(10);
  s.annotated = s.column_count == 11 && annotated;
  s.has_dependencies = dependencies && !s.tokens.empty();
  s.sent_id = sent_id_from_comments(s.comments);
  if (s.sent_id.empty()) s.sent_id = "s" + std::to_string(count_);
  if (s.has_dependencies) check_tree(s);
  if (s.annotated) build_gold(s);
  return s;
}

std::vector<Sentence> parse_cupt(std::istream& in) {
  std::vector<Sentence> out;
  CuptReader reader(in);
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

std::vector<Sentence> parse_cupt_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_cupt(in);
}

std::vector<Sentence> read_cupt_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open corpus '" + path + "'");
  return parse_cupt(in);
}

namespace {

std::vector<std::vector<std::string>> prediction_columns(const Sentence& s,
                                                         const std::vector<const PredictedVmwe*>& preds) {
  std::vector<std::vector<std::string>> codes(s.tokens.size());
  int index = 0;
  for (const auto* p : preds) {
    ++index;
    for (std::size_t i = 0; i < p->token_ids.size(); ++i) {
      const int id = p->token_ids[i];
      std::string code = std::to_string(index);
      if (i == 0 && p->category) code += ":" + std::string(to_string(*p->category));
      codes[static_cast<std::size_t>(id - 1)].push_back(std::move(code));
    }
  }
  return codes;
}

}  // namespace

void write_cupt(std::ostream& out, std::span<const Sentence> sentences,
                const std::vector<PredictedVmwe>* predictions) {
  std::vector<std::vector<const PredictedVmwe*>> by_sentence;
  if (predictions) {
    by_sentence.resize(sentences.size());
    for (const auto& p : *predictions) {
      if (p.sent_index >= sentences.size())
        throw ValidationError("prediction references unknown sentence " + p.sent_id);
      const auto& s = sentences[p.sent_index];
      if (!p.sent_id.empty() && p.sent_id != s.sent_id)
        throw ValidationError("prediction sent_id '" + p.sent_id + "' does not match '" + s.sent_id + "'");
      for (int id : p.token_ids)
        if (!s.valid_id(id))
          throw ValidationError("prediction references unknown token " + std::to_string(id) +
                                " in sentence " + s.sent_id);
      by_sentence[p.sent_index].push_back(&p);
    }
  }

  for (std::size_t si = 0; si < sentences.size(); ++si) {
    const auto& s = sentences[si];
    for (const auto& c : s.comments) out << c << '\n';
    std::vector<std::vector<std::string>> codes;
    if (predictions) codes = prediction_columns(s, by_sentence[si]);
    for (const auto& row : s.rows) {
      if (const auto* raw = std::get_if<std::string>(&row)) {
        if (predictions && s.column_count == 10)
          out << *raw << "\t*\n";
        else
          out << *raw << '\n';
        continue;
      }
      const auto& t = s.tokens[std::get<std::size_t>(row)];
      out << t.id << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t' << t.xpos << '\t'
          << t.feats << '\t';
      if (t.head < 0)
        out << '_';
      else
        out << t.head;
      out << '\t' << t.deprel << '\t' << t.deps << '\t' << t.misc;
      if (predictions) {
        const auto& c = codes[static_cast<std::size_t>(t.id - 1)];
        out << '\t';
        if (c.empty()) {
          out << '*';
        } else {
          for (std::size_t i = 0; i < c.size(); ++i) out << (i ? ";" : "") << c[i];
        }
      } else if (s.column_count == 11) {
        out << '\t' << t.mwe_column;
      }
      out << '\n';
    }
    out << '\n';
  }
}

std::string write_cupt_string(std::span<const Sentence> sentences,
                              const std::vector<PredictedVmwe>* predictions) {
  std::ostringstream out;
  write_cupt(out, sentences, predictions);
  return out.str();
}

std::size_t count_tokens(std::span<const Sentence> sentences) {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

std::vector<PredictedVmwe> predictions_from_annotations(std::span<const Sentence> sentences) {
  std::vector<PredictedVmwe> out;
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    for (const auto& g : sentences[si].gold_vmwes) {
      PredictedVmwe p;
      p.sent_index = si;
      p.sent_id = sentences[si].sent_id;
      p.token_ids = g.token_ids;
      if (!g.raw_category.empty()) p.category = g.category;
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace vmwe
