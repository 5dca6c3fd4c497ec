// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.h"
#include "smipe/corpus.h"
#include "smipe/embedding.h"
#include "smipe/fingerprint.h"
#include "smipe/metrics.h"
#include "smipe/pretokenizer.h"
#include "smipe/smiles.h"
#include "smipe/tokenizer.h"
#include "smipe/trainer.h"
#include "smipe/vocab_extension.h"
#include "test_data.h"

namespace {

using namespace smipe;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome round_trip(const std::vector<std::string>& corpus) {
  const auto start = Clock::now();
  std::size_t iso = 0;
  std::size_t lossless = 0;
  for (const auto& s : corpus) {
    const auto m = parse_smiles(s);
    if (oracle::isomorphic(parse_smiles(write_canonical(m)), m)) ++iso;
    std::string joined;
    for (const auto& u : atom_units(s)) joined += u;
    if (joined == s) ++lossless;
  }
  const double t = seconds_since(start);
  const std::size_t n = corpus.size();
  return {n >= 1000 && iso == n && lossless == n && t < 10.0,
          fmt("%zu SMILES, isomorphic %zu/%zu, lossless units %zu/%zu, %.2f s (limit 10 s)", n,
              iso, n, lossless, n, t)};
}

Outcome canonical_invariance(const std::vector<std::string>& corpus) {
  const auto start = Clock::now();
  std::size_t cases = 0;
  std::size_t canon_ok = 0;
  std::size_t fps_ok = 0;
  const std::size_t stride = corpus.size() / 200;
  for (std::size_t k = 0; k < 200; ++k) {
    const auto m = parse_smiles(corpus[k * stride]);
    const auto canon = write_canonical(m);
    const auto fp = morgan_fingerprint(m);
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
      const auto variant = parse_smiles(write_random(m, seed));
      ++cases;
      if (write_canonical(variant) == canon) ++canon_ok;
      if (morgan_fingerprint(variant) == fp) ++fps_ok;
    }
  }
  const double t = seconds_since(start);
  return {cases == 3200 && canon_ok == cases && fps_ok == cases && t < 30.0,
          fmt("canonical %zu/%zu, fingerprints %zu/%zu, %.2f s (limit 30 s)", canon_ok, cases,
              fps_ok, cases, t)};
}

Outcome trainer_oracle() {
  std::mt19937_64 rng(20240917);
  int identical = 0;
  std::size_t total_merges = 0;
  for (int c = 0; c < 25; ++c) {
    std::vector<std::vector<std::string>> seqs;
    const std::size_t n = 1 + rng() % 50;
    for (std::size_t i = 0; i < n; ++i) {
      const auto m = oracle::random_molecule(rng, {12, c % 3 == 0});
      seqs.push_back(atom_units(write_random(m, rng())));
    }
    const auto fast = learn_merges(seqs, 3);
    if (fast == oracle::naive_learn_merges(seqs, 3)) ++identical;
    total_merges += fast.size();
  }

  const std::vector<std::string> three(3, "CCO");
  std::map<std::pair<std::string, std::string>, std::int64_t> counts;
  for (const auto& s : three) {
    const auto u = atom_units(s);
    for (std::size_t i = 1; i < u.size(); ++i) ++counts[{u[i - 1], u[i]}];
  }
  std::int64_t max_count = 0;
  for (const auto& [pair, count] : counts) max_count = std::max(max_count, count);
  TrainerConfig cfg;
  cfg.augment = false;
  const auto threshold_rules = train(three, cfg).merges;
  return {identical == 25 && total_merges > 0 && max_count == 3 && threshold_rules.empty(),
          fmt("%d/25 corpora identical to the naive recount (%zu merges total); "
              "max pair count %lld gives %zu merges",
              identical, total_merges, static_cast<long long>(max_count),
              threshold_rules.size())};
}

Outcome fertility(const std::vector<std::string>& corpus) {
  TrainerConfig cfg;
  cfg.threshold = 3;
  const auto result = train(corpus, cfg);
  std::set<std::string> units;
  for (const auto& [u, c] : result.unit_counts) units.insert(u);
  const auto model = TokenizerModel::build(result.merges, units);
  const TokenCounter tok_a = [](std::string_view s) { return atom_units(s).size(); };
  const TokenCounter tok_b = [&model](std::string_view s) {
    return model.encode_smiles(s).size();
  };
  const auto r = fertility_report(corpus, tok_a, tok_b);
  bool dominated = true;
  for (std::size_t i = 0; i < corpus.size(); ++i) dominated &= r.counts_b[i] <= r.counts_a[i];
  return {r.median_b < r.median_a && r.single_token_fraction_b > 0.0 && dominated,
          fmt("%zu merges; median atom units %zu vs trained %zu; single-token fraction %.4f",
              result.merges.size(), r.median_a, r.median_b, r.single_token_fraction_b)};
}

Outcome fallback() {
  const auto model = TokenizerModel::build({{"[1*]", "N", 0, 4}},
                                           {"[1*]", "N", "C", "(", "=", "O", ")"});
  const auto tokens = model.encode_smiles_tokens("[1*]NC(=O)N[2*]");
  const std::vector<std::string> expected = {"[1*]N", "C", "(", "=", "O", ")",
                                             "N",     "[", "2", "*", "]"};
  std::string shown;
  for (const auto& t : tokens) shown += (shown.empty() ? "" : " ") + t;
  return {!model.vocabulary().contains("[2*]") && model.vocabulary().contains("[1*]N") &&
              tokens == expected,
          "tokens: " + shown};
}

Outcome embeddings() {
  std::mt19937_64 rng(64);
  std::normal_distribution<float> dist(0.0f, 1.0f);
  const std::vector<std::pair<std::size_t, std::size_t>> shapes = {
      {1, 1}, {2, 2}, {3, 7}, {17, 5}, {100, 16}, {256, 32}, {512, 48}, {1024, 64}};
  std::size_t bit_exact_rows = 0;
  std::size_t base_rows = 0;
  double worst = 0.0;
  for (const auto& [rows, cols] : shapes) {
    std::vector<float> values(rows * cols);
    for (auto& v : values) v = dist(rng) + 0.25f;
    const EmbeddingMatrix m(rows, cols, values);
    ExtensionPlan plan;
    plan.base_vocab_size = rows;
    const std::size_t added = 1 + rng() % 9;
    for (std::size_t i = 0; i < added; ++i) {
      plan.entries.push_back({"tok" + std::to_string(i), TokenSource::kSmiles, 1});
    }
    const auto ext = extend_embeddings(m, plan);
    if (ext.rows() != rows + added || ext.cols() != cols) return {false, "wrong shape"};
    for (std::size_t r = 0; r < rows; ++r) {
      ++base_rows;
      if (std::memcmp(ext.row(r).data(), m.row(r).data(), cols * sizeof(float)) == 0) {
        ++bit_exact_rows;
      }
    }
    const auto means = oracle::column_means(values, rows, cols);
    for (std::size_t r = rows; r < ext.rows(); ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const double err = std::abs(ext.row(r)[c] - means[c]) / std::max(std::abs(means[c]), 1e-30);
        worst = std::max(worst, err);
      }
    }
  }
  return {bit_exact_rows == base_rows && worst <= 1e-6,
          fmt("%zu shapes up to 1024x64; base rows bit-exact %zu/%zu; worst relative error %.3g "
              "(limit 1e-6)",
              shapes.size(), bit_exact_rows, base_rows, worst)};
}

Outcome metric_counts(const std::vector<std::string>& corpus) {
  std::vector<GenerationRecord> records;
  std::vector<int> kind;  // 0 exact, 1 near miss, 2 invalid
  for (int i = 0; i < 100; ++i) {
    const std::string& gold = corpus[static_cast<std::size_t>(i) * 17 % corpus.size()];
    if (i < 60) {
      const auto variant = write_random(parse_smiles(gold), static_cast<std::uint64_t>(i));
      records.push_back({"The answer is <SMILES>" + variant + "</SMILES>.", gold});
      kind.push_back(0);
    } else if (i < 85) {
      records.push_back({"<SMILES>" + gold + "C</SMILES>", gold});
      kind.push_back(1);
    } else if (i < 90) {
      records.push_back({"I cannot determine the product " + gold, gold});
      kind.push_back(2);
    } else {
      records.push_back({"<SMILES>" + gold + "(</SMILES>", gold});
      kind.push_back(2);
    }
  }
  const auto r = score_task(records);
  std::size_t exact_fps_one = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    if (kind[i] == 0 && r.records[i].exact && r.records[i].fps == 1.0) ++exact_fps_one;
  }
  return {r.score.n_exact_match == 60 && r.score.n_invalid == 15 && exact_fps_one == 60,
          fmt("n_exact_match=%zu, n_invalid=%zu, exact records with fps 1.0: %zu/60, "
              "mean_fps=%.4f",
              r.score.n_exact_match, r.score.n_invalid, exact_fps_one, r.score.mean_fps)};
}

Outcome blend_fidelity() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "smipe_acceptance_blend";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, double>> table = {
      {"patents", 0.50}, {"articles", 0.35}, {"instructions", 0.10}, {"web", 0.05}};
  const std::vector<std::size_t> sizes = {3000, 1700, 450, 120};
  std::vector<DatasetSpec> specs;
  for (std::size_t d = 0; d < table.size(); ++d) {
    std::ofstream out(dir / (table[d].first + ".jsonl"));
    for (std::size_t i = 0; i < sizes[d]; ++i) {
      out << "{\"text\": \"" << table[d].first << " record " << i << "\"}\n";
    }
    specs.push_back({table[d].first, dir / (table[d].first + ".jsonl"), table[d].second,
                     RecordFormat::kJsonl, "text"});
  }
  const auto serial = blend(load_datasets(specs, 1), 10000, 7);
  const auto again = blend(load_datasets(specs, 1), 10000, 7);
  const auto threaded = blend(load_datasets(specs, 8), 10000, 7);
  fs::remove_all(dir);

  const std::vector<double> target = {5000, 3500, 1000, 500};
  std::vector<std::size_t> realized(table.size(), 0);
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    const auto& text = serial.records[i];
    for (std::size_t d = 0; d < table.size(); ++d) {
      if (text.rfind(table[d].first + " ", 0) == 0) ++realized[d];
    }
  }
  bool within = serial.records.size() == 10000;
  for (std::size_t d = 0; d < table.size(); ++d) {
    within &= std::abs(static_cast<double>(realized[d]) - target[d]) <= 1.0;
    within &= serial.manifest[d].second == realized[d];
  }
  const bool deterministic = serial.records_jsonl() == again.records_jsonl() &&
                             serial.manifest_json() == again.manifest_json();
  const bool thread_invariant = serial.records_jsonl() == threaded.records_jsonl() &&
                                serial.manifest_json() == threaded.manifest_json();
  return {within && deterministic && thread_invariant,
          fmt("realized %zu/%zu/%zu/%zu; repeat run identical: %s; threads 1 vs 8 identical: %s",
              realized[0], realized[1], realized[2], realized[3], deterministic ? "yes" : "no",
              thread_invariant ? "yes" : "no")};
}

Outcome tanimoto_examples() {
  const std::vector<std::size_t> a_bits = {1, 2, 3};
  const std::vector<std::size_t> b_bits = {2, 3, 4};
  const std::vector<std::size_t> c_bits = {7, 8};
  const auto a = Fingerprint::from_bits(kDefaultBits, a_bits);
  const auto b = Fingerprint::from_bits(kDefaultBits, b_bits);
  const auto c = Fingerprint::from_bits(kDefaultBits, c_bits);
  const double self = tanimoto(a, a);
  const double disjoint = tanimoto(a, c);
  const double half = tanimoto(a, b);
  return {self == 1.0 && disjoint == 0.0 && half == 0.5,
          fmt("self %.17g, disjoint %.17g, {1,2,3} vs {2,3,4} %.17g", self, disjoint, half)};
}

}  // namespace

int main() {
  const auto corpus = bundled_corpus();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"round-trip and lossless pre-tokenization", [&] { return round_trip(corpus); }},
      {"randomized/canonical invariance", [&] { return canonical_invariance(corpus); }},
      {"trainer equals naive oracle; threshold semantics", trainer_oracle},
      {"fertility dominance and shape", [&] { return fertility(corpus); }},
      {"character fallback for unknown bracket atoms", fallback},
      {"embedding extension", embeddings},
      {"metric counts on a synthetic evaluation set", [&] { return metric_counts(corpus); }},
      {"blend fidelity", blend_fidelity},
      {"tanimoto arithmetic", tanimoto_examples},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %zu: %s  %s | %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
