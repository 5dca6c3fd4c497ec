#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "../oracles.h"
#include "smipe/embedding.h"
#include "smipe/error.h"
#include "smipe/vocab_extension.h"

namespace {

using namespace smipe;
using Words = std::vector<std::string_view>;

// Splits "aaa" into three single bytes and keeps "bbb" whole.
BaseTokenizer toy_base() {
  return BaseTokenizer::parse("b\nbb\nbbb\n", "b b\nbb b\n");
}

TEST(ExtractWords, Segmentation) {
  EXPECT_EQ(extract_words("The mmol, 3-fold (invention)!"),
            (Words{"The", "mmol", "fold", "invention"}));
  EXPECT_EQ(extract_words("naïve Ωmega ДНК x×y"),
            (Words{"naïve", "Ωmega", "ДНК", "x", "y"}));
  EXPECT_TRUE(extract_words("123 !? \xff").empty());
}

TEST(ExtractTextOov, ToyCorpus) {
  const auto base = toy_base();
  const std::vector<std::string> corpus = {"aaa bbb aaa"};
  EXPECT_EQ(extract_text_oov(corpus, base, 10),
            (std::vector<TokenCount>{{"aaa", 2}}));
  EXPECT_TRUE(extract_text_oov(std::vector<std::string>{}, base, 1).empty());
}

TEST(ExtractTextOov, SkipsSmilesAndTagsAndBreaksTies) {
  const auto base = toy_base();
  const std::vector<std::string> corpus = {
      "zeta <SMILES>CCOCCOCC</SMILES> alpha<EOS>beta",
      "<MOLFORMULA>CHO</MOLFORMULA> beta alpha zeta"};
  const auto top = extract_text_oov(corpus, base, 10, 2);
  EXPECT_EQ(top, (std::vector<TokenCount>{{"alpha", 2}, {"beta", 2}, {"zeta", 2}, {"CHO", 1}}));
  EXPECT_EQ(extract_text_oov(corpus, base, 2, 1),
            (std::vector<TokenCount>{{"alpha", 2}, {"beta", 2}}));
}

TEST(Plan, Example) {
  const Vocabulary base({"a", "CC", "b"});
  const std::vector<TokenCount> smiles = {{"CC", 9}, {"CCO", 5}};
  const std::vector<TokenCount> text = {{"mmol", 4}};
  const std::vector<std::string> specials = {"<SMILES>"};
  const auto plan = build_extension_plan(smiles, text, specials, base);
  EXPECT_EQ(plan.base_vocab_size, 3u);
  EXPECT_EQ(plan.entries, (std::vector<PlanEntry>{{"CCO", TokenSource::kSmiles, 5},
                                                  {"mmol", TokenSource::kText, 4},
                                                  {"<SMILES>", TokenSource::kSpecial, 0}}));
  EXPECT_EQ(plan.collisions_dropped, (std::vector<std::string>{"CC"}));
  EXPECT_EQ(plan.id_of(0), 3);

  const auto ext = extended_vocabulary(base, plan);
  EXPECT_EQ(ext.size(), 6u);
  EXPECT_EQ(ext.find("mmol"), 4);
  EXPECT_TRUE(ext.is_special("<SMILES>"));
  for (TokenId i = 0; i < 3; ++i) EXPECT_EQ(ext.token(i), base.token(i));
}

TEST(Plan, EmptyInputs) {
  const auto plan = build_extension_plan({}, {}, {}, Vocabulary{});
  EXPECT_TRUE(plan.entries.empty());
  EXPECT_TRUE(plan.collisions_dropped.empty());
}

TEST(Plan, RepeatsKeepFirstOccurrence) {
  const std::vector<TokenCount> smiles = {{"Cl", 3}, {"CCO", 2}};
  const std::vector<TokenCount> text = {{"Cl", 7}, {"mmol", 1}};
  const std::vector<std::string> specials = {"<EOS>", "<EOS>"};
  const auto plan = build_extension_plan(smiles, text, specials, Vocabulary{});
  ASSERT_EQ(plan.entries.size(), 4u);
  EXPECT_EQ(plan.entries[0], (PlanEntry{"Cl", TokenSource::kSmiles, 3}));
  EXPECT_EQ(plan.entries[3].token, "<EOS>");

  const auto merged_only = build_extension_plan(smiles, text, specials, Vocabulary{},
                                                {.include_atom_units = false});
  EXPECT_EQ(merged_only.entries[0].token, "CCO");
  EXPECT_EQ(merged_only.entries[1], (PlanEntry{"Cl", TokenSource::kText, 7}));
}

TEST(Plan, FullScaleArithmetic) {
  std::vector<TokenCount> smiles;
  for (int i = 0; i < 16795; ++i) smiles.emplace_back("S" + std::to_string(i), 4);
  std::vector<TokenCount> text;
  for (int i = 0; i < 1000; ++i) text.emplace_back("w" + std::to_string(i), 1);
  const std::vector<std::string> specials = {"<EOS>", "<SMILES>", "</SMILES>",
                                             "<MOLFORMULA>", "</MOLFORMULA>"};
  const auto plan = build_extension_plan(smiles, text, specials, Vocabulary({"x"}));
  EXPECT_EQ(plan.entries.size(), 17795u + specials.size());
  EXPECT_EQ(plan.id_of(plan.entries.size() - 1), static_cast<TokenId>(1 + 17795 + 4));
}

TEST(Plan, JsonRoundTripIsByteStable) {
  const std::vector<TokenCount> smiles = {{"CCO", 5}, {"c1cc\"", 2}};
  const std::vector<std::string> specials = {"<EOS>"};
  const auto plan = build_extension_plan(smiles, {}, specials, Vocabulary({"CCO"}));
  const auto text = plan.to_json();
  EXPECT_EQ(text, build_extension_plan(smiles, {}, specials, Vocabulary({"CCO"})).to_json());
  const auto back = ExtensionPlan::from_json(text);
  EXPECT_EQ(back.to_json(), text);
  EXPECT_EQ(back.entries, plan.entries);
  EXPECT_THROW(ExtensionPlan::from_json("{}"), FormatError);
  EXPECT_THROW(ExtensionPlan::from_json(
                   R"({"base_vocab_size":1,"entries":[{"token":"a","source":"alien","freq":1}],"collisions_dropped":[]})"),
               FormatError);
}

TEST(Plan, ExtendedVocabularyChecksSize) {
  const Vocabulary base({"a"});
  ExtensionPlan plan;
  plan.base_vocab_size = 2;
  EXPECT_THROW(extended_vocabulary(base, plan), Error);
}

ExtensionPlan plan_of(std::size_t base_rows, std::size_t new_tokens) {
  ExtensionPlan plan;
  plan.base_vocab_size = base_rows;
  for (std::size_t i = 0; i < new_tokens; ++i) {
    plan.entries.push_back({"t" + std::to_string(i), TokenSource::kSmiles, 1});
  }
  return plan;
}

TEST(Embedding, MeanRowExample) {
  const EmbeddingMatrix m(2, 2, {1, 3, 3, 1});
  const auto ext = extend_embeddings(m, plan_of(2, 1));
  ASSERT_EQ(ext.rows(), 3u);
  EXPECT_EQ(ext.row(2)[0], 2.0f);
  EXPECT_EQ(ext.row(2)[1], 2.0f);
  EXPECT_EQ(extend_embeddings(m, plan_of(2, 0)), m);
  EXPECT_THROW(extend_embeddings(m, plan_of(3, 1)), Error);
  EXPECT_THROW(extend_embeddings(EmbeddingMatrix(0, 4), plan_of(0, 1)), Error);
}

TEST(Embedding, MatchesIndependentMeans) {
  std::mt19937_64 rng(4);
  std::normal_distribution<float> dist(0.0f, 2.0f);
  std::vector<float> values(4 * 3);
  for (auto& v : values) v = dist(rng);
  const EmbeddingMatrix m(4, 3, values);
  const auto ext = extend_embeddings(m, plan_of(4, 2));
  const auto means = oracle::column_means(values, 4, 3);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_EQ(std::memcmp(&ext.row(r)[c], &values[r * 3 + c], sizeof(float)), 0);
    }
  }
  for (std::size_t r = 4; r < 6; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_NEAR(ext.row(r)[c], means[c], 1e-6 * std::max(1.0, std::abs(means[c])));
    }
  }
}

TEST(Embedding, FileFormatIsExact) {
  const EmbeddingMatrix m(2, 1, {1.0f, -2.5f});
  const auto bytes = m.serialize();
  const std::string expected("EMB1"
                             "\x02\x00\x00\x00\x00\x00\x00\x00"
                             "\x01\x00\x00\x00\x00\x00\x00\x00"
                             "\x00\x00\x80\x3f"
                             "\x00\x00\x20\xc0",
                             28);
  EXPECT_EQ(bytes, expected);
  EXPECT_EQ(EmbeddingMatrix::deserialize(bytes), m);
  EXPECT_THROW(EmbeddingMatrix::deserialize(bytes.substr(0, 27)), FormatError);
  EXPECT_THROW(EmbeddingMatrix::deserialize("EMB2" + bytes.substr(4)), FormatError);
  EXPECT_THROW(EmbeddingMatrix(2, 2, {1.0f}), FormatError);

  const auto path = std::filesystem::temp_directory_path() / "smipe_emb_test.bin";
  m.save(path);
  EXPECT_EQ(EmbeddingMatrix::load(path), m);
  std::filesystem::remove(path);
}

}  // namespace
