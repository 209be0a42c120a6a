#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "vmwe/corpus.hpp"
#include "vmwe/dependency.hpp"
#include "vmwe/error.hpp"
#include "vmwe/lexicon.hpp"

using namespace vmwe;
using testing_support::data_path;

namespace {

const std::vector<Sentence>& train() {
  static const auto s = read_cupt_file(data_path("train.cupt").string());
  return s;
}

}  // namespace

TEST(Lexicon, FixtureTypes) {
  LexiconStats stats;
  const auto lex = build_lexicon(train(), 2, &stats);
  std::map<std::string, int> expected{{"décision+prendre/NOUN+VERB", 2}, {"se+souvenir/PRON+VERB", 1},
                                      {"casser+pied/NOUN+VERB", 1},      {"faire+savoir/VERB+VERB", 0},
                                      {"mettre+sur+table/ADP+NOUN+VERB", 3}, {"avoir+lieu/NOUN+VERB", 0}};
  std::map<std::string, int> got;
  for (const auto& t : lex.types()) got[t.type_id] = t.max_insert_count;
  EXPECT_EQ(got, expected);
  EXPECT_EQ(stats.types_total, expected.size() + 1);  // prendre+porte falls below min_count
  EXPECT_EQ(lex.find("décision+prendre/NOUN+VERB")->category, Category::LVC);
  EXPECT_EQ(lex.find("se+souvenir/PRON+VERB")->category, Category::IRV);
}

TEST(Lexicon, EveryTypeMeetsMinCount) {
  for (int m : {1, 2, 3, 5}) {
    const auto lex = build_lexicon(train(), m);
    for (const auto& t : lex.types()) {
      EXPECT_GE(static_cast<int>(t.train_count()), m);
      int max_ins = 0;
      for (const auto& o : t.occurrences) max_ins = std::max(max_ins, o.insert_count);
      EXPECT_EQ(max_ins, t.max_insert_count);
      EXPECT_TRUE(std::is_sorted(t.lemmas.begin(), t.lemmas.end()));
      EXPECT_TRUE(std::is_sorted(t.upos.begin(), t.upos.end()));
    }
  }
  EXPECT_NE(build_lexicon(train(), 1).find("porte+prendre/NOUN+VERB"), nullptr);
}

TEST(Lexicon, SeenIndexUsesLemmasOnly) {
  const auto lex = build_lexicon(train(), 2);
  const std::vector<std::string> porte{"prendre", "porte"};
  const auto* seen = lex.seen(porte);
  ASSERT_NE(seen, nullptr);
  EXPECT_EQ(seen->count, 1u);
  EXPECT_EQ(lex.lookup(porte, std::vector<std::string>{"VERB", "NOUN"}), nullptr);
  const std::vector<std::string> page{"tourner", "page"};
  EXPECT_EQ(lex.seen(page), nullptr);
}

TEST(Lexicon, LookupIgnoresOrder) {
  const auto lex = build_lexicon(train(), 2);
  const std::vector<std::string> lemmas{"prendre", "décision"}, upos{"VERB", "NOUN"};
  const auto* t = lex.lookup(lemmas, upos);
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->type_id, "décision+prendre/NOUN+VERB");
  EXPECT_EQ(lex.lookup(lemmas, std::vector<std::string>{"VERB", "VERB"}), nullptr);
  EXPECT_FALSE(lex.types_with_lemma("décision").empty());
  EXPECT_TRUE(lex.types_with_lemma("absent").empty());
}

TEST(Lexicon, JsonRoundTrip) {
  const auto lex = build_lexicon(train(), 2);
  const auto back = Lexicon::from_json(lex.to_json());
  EXPECT_EQ(back.to_json(), lex.to_json());
  ASSERT_EQ(back.types().size(), lex.types().size());
  for (std::size_t i = 0; i < lex.types().size(); ++i)
    EXPECT_EQ(back.types()[i].occurrences, lex.types()[i].occurrences);
}

TEST(Lexicon, FromJsonRejectsGarbage) {
  EXPECT_THROW(Lexicon::from_json(nlohmann::json{{"version", 99}}), ValidationError);
  EXPECT_THROW(Lexicon::from_json(nlohmann::json::array()), ValidationError);
}

TEST(Lexicon, RestrictedTo) {
  const auto lex = build_lexicon(train(), 2);
  const std::vector<std::string> keep{"avoir+lieu/NOUN+VERB"};
  const auto sub = lex.restricted_to(keep);
  ASSERT_EQ(sub.types().size(), 1u);
  EXPECT_EQ(sub.types()[0].type_id, keep[0]);
  EXPECT_EQ(sub.find("se+souvenir/PRON+VERB"), nullptr);
}

TEST(Profile, InsertionsRolesAndConnection) {
  const auto s = parse_cupt_string(
      "1\tJean\tJean\tPROPN\t_\t_\t3\tnsubj\t_\t_\t*\n"
      "2\ta\tavoir\tAUX\t_\t_\t3\taux\t_\t_\t*\n"
      "3\tpris\tprendre\tVERB\t_\tVerbForm=Part|Tense=Past\t0\troot\t_\t_\t1:LVC.full\n"
      "4\tune\tun\tDET\t_\t_\t6\tdet\t_\t_\t*\n"
      "5\tgrande\tgrand\tADJ\t_\t_\t6\tamod\t_\t_\t*\n"
      "6\tdécision\tdécision\tNOUN\t_\t_\t3\tobj\t_\t_\t1\n\n");
  const DependencyTree tree(s[0]);
  const std::vector<int> ids{3, 6};
  const auto p = compute_profile(s[0], ids, tree);
  EXPECT_EQ(p.insert_pos_sequence, (std::vector<std::string>{"DET", "ADJ"}));
  EXPECT_EQ(p.insert_count, 2);
  EXPECT_EQ(p.insert_pos_counts.at("DET"), 1);
  EXPECT_EQ(p.syntactic_distance, 1);
  EXPECT_EQ(p.connection, Connection::Direct);
  EXPECT_EQ(p.outgoing_deprels.at("VERB"), (std::vector<std::string>{"aux", "nsubj"}));
  EXPECT_EQ(p.outgoing_deprels.at("NOUN"), (std::vector<std::string>{"amod", "det"}));
  EXPECT_EQ(p.morph_by_role.at("VERB"), "Tense=Past|VerbForm=Part");
  EXPECT_EQ(p.morph_by_role.at("NOUN"), "_");
  EXPECT_EQ(p.surface_forms, (std::vector<std::string>{"pris", "décision"}));
  EXPECT_EQ(profile_from_json(profile_to_json(p)), p);
}

TEST(Profile, RepeatedTagsGetNumberedRoles) {
  const auto s = parse_cupt_string(
      "1\tfait\tfaire\tVERB\t_\t_\t0\troot\t_\t_\t*\n"
      "2\tsavoir\tsavoir\tVERB\t_\t_\t1\txcomp\t_\t_\t*\n\n");
  const std::vector<int> ids{1, 2};
  EXPECT_EQ(assign_roles(s[0], ids), (std::vector<std::string>{"VERB", "VERB#2"}));
}

TEST(Profile, Buckets) {
  EXPECT_EQ(bucket(0), "0");
  EXPECT_EQ(bucket(4), "4");
  EXPECT_EQ(bucket(5), "5+");
  EXPECT_EQ(bucket(17), "5+");
  EXPECT_EQ(connection_for_distance(1), Connection::Direct);
  EXPECT_EQ(connection_for_distance(2), Connection::Quasi);
  EXPECT_EQ(connection_for_distance(3), Connection::None);
  EXPECT_EQ(connection_for_distance(-1), Connection::None);
}

TEST(Dependency, Distances) {
  const auto s = parse_cupt_string(
      "1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\t*\n"
      "2\tb\tb\tX\t_\t_\t0\troot\t_\t_\t*\n"
      "3\tc\tc\tX\t_\t_\t2\tdep\t_\t_\t*\n"
      "4\td\td\tX\t_\t_\t3\tdep\t_\t_\t*\n\n");
  const DependencyTree t(s[0]);
  EXPECT_EQ(t.distance(1, 1), 0);
  EXPECT_EQ(t.distance(1, 2), 1);
  EXPECT_EQ(t.distance(1, 3), 2);
  EXPECT_EQ(t.distance(1, 4), 3);
  EXPECT_EQ(t.distance(4, 1), 3);
  EXPECT_EQ(t.dependents(2), (std::vector<int>{1, 3}));
}
