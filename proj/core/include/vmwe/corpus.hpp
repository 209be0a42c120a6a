#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vmwe {

enum class Category { VID, LVC, IRV, MVC, Other };

inline constexpr Category kCategories[] = {Category::VID, Category::LVC, Category::IRV,
                                           Category::MVC};

std::string_view to_string(Category c);
/// Coarse category of a raw cupt label: "LVC.full" and "LVC.cause" become LVC.
Category normalize_category(std::string_view raw);
/// Parses a coarse name ("VID", "LVC", ...). Throws ValidationError otherwise.
Category parse_category(std::string_view name);

/// One `index[:category]` entry of the VMWE column.
struct MweTag {
  int index = 0;
  std::optional<std::string> category;
};

struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::string feats;                     // raw column, "_" when empty
  std::vector<std::string> morph_feats;  // key=value, in column order
  int head = -1;                         // -1 when the column is "_"
  std::string deprel;
  std::string deps;
  std::string misc;
  std::string mwe_column;  // raw eleventh column, empty for 10-column input
  std::vector<MweTag> mwe_annotations;
};

struct GoldVmwe {
  std::vector<int> token_ids;  // sorted ascending
  Category category = Category::Other;
  std::string raw_category;
  std::vector<std::string> lemmas;  // sorted multiset
  std::vector<std::string> upos;    // sorted multiset
};

struct Sentence {
  /// A line of the original block: either a word token (index into tokens)
  /// or a verbatim range / empty-node line.
  using Row = std::variant<std::size_t, std::string>;

  std::string sent_id;
  std::vector<std::string> comments;  // verbatim, including the leading '#'
  std::vector<Row> rows;
  std::vector<Token> tokens;  // word tokens only, ids 1..n
  std::vector<GoldVmwe> gold_vmwes;
  std::size_t column_count = 10;
  bool annotated = false;         // eleventh column present and not "_"
  bool has_dependencies = false;  // every head is numeric

  const Token& token(int id) const { return tokens.at(static_cast<std::size_t>(id - 1)); }
  bool valid_id(int id) const { return id >= 1 && id <= static_cast<int>(tokens.size()); }
};

/// Streaming reader: holds one sentence in memory at a time.
class CuptReader {
 public:
  explicit CuptReader(std::istream& in) : in_(in) {}

  /// Next sentence, or nullopt at end of input.
  std::optional<Sentence> next();
  std::size_t line_number() const noexcept { return line_; }
  std::size_t sentences_read() const noexcept { return count_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t count_ = 0;
};

std::vector<Sentence> parse_cupt(std::istream& in);
std::vector<Sentence> parse_cupt_string(std::string_view text);
std::vector<Sentence> read_cupt_file(const std::string& path);

/// A VMWE predicted by the system, addressed by corpus position.
struct PredictedVmwe {
  std::size_t sent_index = 0;
  std::string sent_id;
  std::vector<int> token_ids;  // sorted ascending
  std::optional<Category> category;
  double score = 0.0;
  std::optional<std::size_t> candidate;  // index into the candidate list
};

/// Serializes sentences. Without predictions the output reproduces the input
/// lines; with predictions the VMWE column of word tokens is rewritten.
void write_cupt(std::ostream& out, std::span<const Sentence> sentences,
                const std::vector<PredictedVmwe>* predictions = nullptr);
std::string write_cupt_string(std::span<const Sentence> sentences,
                              const std::vector<PredictedVmwe>* predictions = nullptr);

/// Number of word tokens (range and empty-node lines excluded).
std::size_t count_tokens(std::span<const Sentence> sentences);

/// Reads the VMWE column of a system output back into predictions.
std::vector<PredictedVmwe> predictions_from_annotations(std::span<const Sentence> sentences);

}  // namespace vmwe
