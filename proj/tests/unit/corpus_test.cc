#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>

#include "smipe/corpus.h"
#include "smipe/error.h"
#include "smipe/pretokenizer.h"
#include "smipe/tokenizer.h"
#include "smipe/trainer.h"
#include "test_data.h"

namespace {

using namespace smipe;

std::vector<Dataset> numbered(const std::vector<std::pair<std::string, double>>& specs,
                              std::size_t size) {
  std::vector<Dataset> out;
  for (const auto& [name, weight] : specs) {
    Dataset d{name, weight, {}};
    for (std::size_t i = 0; i < size; ++i) d.records.push_back(name + std::to_string(i));
    out.push_back(std::move(d));
  }
  return out;
}

TEST(WrapSmiles, Examples) {
  const std::vector<TextSpan> one = {{4, 3}};
  EXPECT_EQ(wrap_smiles("mix CCO now", one), "mix <SMILES>CCO</SMILES> now");
  EXPECT_EQ(wrap_smiles("unchanged", {}), "unchanged");
  const std::vector<TextSpan> two = {{0, 1}, {2, 2}};
  const std::string out = wrap_smiles("C OC", two);
  EXPECT_EQ(out, "<SMILES>C</SMILES> <SMILES>OC</SMILES>");
  EXPECT_EQ(out.size(), 4 + 2 * (kSmilesOpen.size() + kSmilesClose.size()));
}

TEST(WrapSmiles, Errors) {
  const std::vector<TextSpan> overlap = {{0, 3}, {2, 2}};
  EXPECT_THROW(wrap_smiles("CCOCC", overlap), Error);
  const std::vector<TextSpan> range = {{4, 3}};
  EXPECT_THROW(wrap_smiles("CCOCC", range), Error);
  const std::vector<TextSpan> unsorted = {{3, 1}, {0, 1}};
  EXPECT_THROW(wrap_smiles("CCOCC", unsorted), Error);
  const std::vector<TextSpan> empty = {{1, 0}};
  EXPECT_THROW(wrap_smiles("CCOCC", empty), Error);
}

TEST(ConcatRecords, Examples) {
  EXPECT_EQ(concat_records(std::vector<std::string>{"a", "b"}), "a<EOS>b");
  EXPECT_EQ(concat_records(std::vector<std::string>{"a"}), "a");
  EXPECT_EQ(concat_records(std::vector<std::string>{}), "");
  const std::vector<std::string> samples = {"x y", "", "<SMILES>C</SMILES>"};
  const auto joined = concat_records(samples);
  std::vector<std::string> split;
  std::size_t start = 0;
  while (true) {
    const auto at = joined.find(kEos, start);
    split.push_back(joined.substr(start, at - start));
    if (at == std::string::npos) break;
    start = at + kEos.size();
  }
  EXPECT_EQ(split, samples);
  EXPECT_EQ(joined.size(), 3 + 0 + 18 + 2 * kEos.size());
}

TEST(BlendCounts, LargestRemainder) {
  const std::vector<double> table = {0.50, 0.35, 0.10, 0.05};
  EXPECT_EQ(blend_counts(table, 10000), (std::vector<std::size_t>{5000, 3500, 1000, 500}));
  const std::vector<double> thirds = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_EQ(blend_counts(thirds, 10), (std::vector<std::size_t>{4, 3, 3}));
  for (std::size_t total : {0u, 1u, 7u, 99u, 12345u}) {
    const auto c = blend_counts(table, total);
    EXPECT_EQ(std::accumulate(c.begin(), c.end(), std::size_t{0}), total);
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_LE(std::abs(static_cast<double>(c[i]) - table[i] * static_cast<double>(total)), 1.0);
    }
  }
}

TEST(Blend, HalfAndHalf) {
  const auto data = numbered({{"A", 0.5}, {"B", 0.5}}, 7);
  const auto r = blend(data, 100, 1);
  ASSERT_EQ(r.records.size(), 100u);
  EXPECT_EQ(r.manifest, (std::vector<std::pair<std::string, std::size_t>>{{"A", 50}, {"B", 50}}));
  std::map<std::size_t, std::size_t> by_source;
  for (auto s : r.sources) ++by_source[s];
  EXPECT_EQ(by_source[0], 50u);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_EQ(r.records[i][0], r.sources[i] == 0 ? 'A' : 'B');
  }
}

TEST(Blend, TableWeightsAndDeterminism) {
  const auto data = numbered({{"patents", 0.50}, {"articles", 0.35}, {"instruct", 0.10},
                              {"web", 0.05}}, 600);
  const auto a = blend(data, 10000, 42);
  const auto b = blend(data, 10000, 42);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.manifest_json(), b.manifest_json());
  EXPECT_EQ(a.manifest[0].second, 5000u);
  EXPECT_EQ(a.manifest[3].second, 500u);
  EXPECT_NE(blend(data, 10000, 43).records, a.records);
}

TEST(Blend, CyclesAndReshuffles) {
  const auto data = numbered({{"only", 1.0}}, 5);
  const auto r = blend(data, 15, 9);
  for (std::size_t epoch = 0; epoch < 3; ++epoch) {
    std::vector<std::string> part(r.records.begin() + static_cast<long>(epoch * 5),
                                  r.records.begin() + static_cast<long>(epoch * 5 + 5));
    std::sort(part.begin(), part.end());
    EXPECT_EQ(part, data[0].records);
  }
  EXPECT_NE(std::vector<std::string>(r.records.begin(), r.records.begin() + 5),
            std::vector<std::string>(r.records.begin() + 5, r.records.begin() + 10));
}

TEST(Blend, Errors) {
  auto data = numbered({{"A", 0.5}, {"B", 0.5}}, 3);
  data[1].records.clear();
  EXPECT_THROW(blend(data, 10, 0), Error);
  EXPECT_THROW(blend(numbered({{"A", 0.5}, {"B", 0.4}}, 3), 10, 0), Error);
  EXPECT_THROW(blend({}, 10, 0), Error);
}

TEST(BlendConfig, ParseAndLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "smipe_blend_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.jsonl") << R"({"text": "alpha"})" << "\n" << R"({"text": "beta"})" << "\n";
  std::ofstream(dir / "b.txt") << "one\ntwo\nthree\n";
  std::ofstream(dir / "empty.txt") << "\n";
  const auto specs = parse_blend_config(
      R"([{"name": "a", "path": "a.jsonl", "weight": 0.25},
          {"name": "b", "path": "b.txt", "weight": 0.75, "format": "lines"}])",
      dir);
  ASSERT_EQ(specs.size(), 2u);
  EXPECT_EQ(specs[0].path, dir / "a.jsonl");
  const auto data = load_datasets(specs, 2);
  EXPECT_EQ(data[0].records, (std::vector<std::string>{"alpha", "beta"}));
  EXPECT_EQ(data[1].records.size(), 3u);

  EXPECT_THROW(parse_blend_config(R"([{"name": "a", "path": "a", "weight": 0.5}])", dir),
               FormatError);
  EXPECT_THROW(parse_blend_config(R"([{"name": "a", "path": "a", "weight": 0.5},
                                      {"name": "a", "path": "b", "weight": 0.5}])", dir),
               FormatError);
  EXPECT_THROW(parse_blend_config(R"({"name": "a"})", dir), FormatError);
  const auto empty = parse_blend_config(
      R"([{"name": "e", "path": "empty.txt", "weight": 1.0, "format": "lines"}])", dir);
  EXPECT_THROW(load_datasets(empty), Error);
  std::filesystem::remove_all(dir);
}

TEST(Histogram, Buckets) {
  EXPECT_EQ(histogram_bucket(1), (std::pair<std::size_t, std::size_t>{1, 1}));
  EXPECT_EQ(histogram_bucket(64), (std::pair<std::size_t, std::size_t>{64, 64}));
  EXPECT_EQ(histogram_bucket(65), (std::pair<std::size_t, std::size_t>{65, 128}));
  EXPECT_EQ(histogram_bucket(128), (std::pair<std::size_t, std::size_t>{65, 128}));
  EXPECT_EQ(histogram_bucket(129), (std::pair<std::size_t, std::size_t>{129, 256}));
}

TEST(Median, LowerMedian) {
  EXPECT_EQ(lower_median({5}), 5u);
  EXPECT_EQ(lower_median({4, 1, 3, 2}), 2u);
  EXPECT_EQ(lower_median({9, 1, 5}), 5u);
  EXPECT_THROW(lower_median({}), Error);
}

TEST(Fertility, SingleString) {
  const TokenCounter units = [](std::string_view s) { return atom_units(s).size(); };
  const auto r = fertility_report(std::vector<std::string>{"C"}, units, units);
  EXPECT_EQ(r.median_a, 1u);
  EXPECT_EQ(r.median_b, 1u);
  EXPECT_EQ(r.single_token_fraction_b, 1.0);
  EXPECT_THROW(fertility_report(std::vector<std::string>{}, units, units), Error);
}

TEST(Fertility, WholeStringVocabulary) {
  const std::vector<std::string> corpus = {"CCO", "c1ccccc1", "CC(=O)O", "N#N"};
  const TokenCounter units = [](std::string_view s) { return atom_units(s).size(); };
  std::set<std::string> whole(corpus.begin(), corpus.end());
  const TokenCounter whole_string = [whole](std::string_view s) {
    return whole.count(std::string(s)) ? std::size_t{1} : s.size();
  };
  const auto r = fertility_report(corpus, units, whole_string, 3);
  EXPECT_EQ(r.median_b, 1u);
  EXPECT_EQ(r.single_token_fraction_b, 1.0);
  EXPECT_EQ(r.counts_a, (std::vector<std::size_t>{3, 8, 7, 3}));
  EXPECT_EQ(r.median_a, 3u);
  ASSERT_EQ(r.histogram.size(), 4u);
  EXPECT_EQ(r.histogram[0].lo, 1u);
  EXPECT_EQ(r.histogram[0].count_b, 4u);
  EXPECT_EQ(r.histogram_tsv().substr(0, 24), "lo\thi\tcount_a\tcount_b\n1\t");
}

TEST(Fertility, TrainedModelNeverIncreasesCounts) {
  auto corpus = bundled_corpus();
  corpus.resize(500);
  TrainerConfig cfg;
  const auto result = train(corpus, cfg);
  std::set<std::string> units;
  for (const auto& [u, c] : result.unit_counts) units.insert(u);
  const auto model = TokenizerModel::build(result.merges, units);
  const TokenCounter tok_a = [](std::string_view s) { return atom_units(s).size(); };
  const TokenCounter tok_b = [&model](std::string_view s) { return model.encode_smiles(s).size(); };
  const auto r = fertility_report(corpus, tok_a, tok_b, 2);
  for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_LE(r.counts_b[i], r.counts_a[i]);
  EXPECT_LT(r.median_b, r.median_a);
}

}  // namespace
