#include "smipe/trainer.h"

#include <algorithm>
#include <queue>
#include <unordered_map>

#include "smipe/error.h"
#include "smipe/parallel.h"
#include "smipe/pretokenizer.h"
#include "smipe/smiles.h"

namespace smipe {

PairCounts count_pairs(std::span<const std::vector<std::string>> sequences) {
  PairCounts counts;
  for (const auto& seq : sequences) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      ++counts[{seq[i], seq[i + 1]}];
    }
  }
  return counts;
}

namespace {

using PairKey = std::uint64_t;

PairKey key_of(int left, int right) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(left)) << 32) |
         static_cast<std::uint32_t>(right);
}
int left_of(PairKey k) { return static_cast<int>(k >> 32); }
int right_of(PairKey k) { return static_cast<int>(k & 0xffffffffu); }

class MergeLearner {
 public:
  explicit MergeLearner(std::span<const std::vector<std::string>> sequences) {
    // Identical sequences collapse into one weighted word.
    std::map<std::vector<int>, std::int64_t> unique;
    for (const auto& seq : sequences) {
      std::vector<int> ids;
      ids.reserve(seq.size());
      for (const auto& unit : seq) ids.push_back(intern(unit));
      ++unique[std::move(ids)];
    }
    words_.reserve(unique.size());
    for (auto& [symbols, count] : unique) words_.push_back({symbols, count});

    for (std::size_t w = 0; w < words_.size(); ++w) {
      add_word_pairs(static_cast<int>(w), +1);
    }
    for (const auto& [key, count] : counts_) push(key);
  }

  std::vector<MergeRule> run(std::int64_t threshold,
                             std::optional<std::size_t> max_merges,
                             const MergeCallback& on_merge) {
    std::vector<MergeRule> rules;
    while (!max_merges || rules.size() < *max_merges) {
      const auto best = pop_best();
      if (!best || best->second <= threshold) break;
      const PairKey key = best->first;
      MergeRule rule{tokens_[static_cast<std::size_t>(left_of(key))],
                     tokens_[static_cast<std::size_t>(right_of(key))],
                     static_cast<int>(rules.size()), best->second};
      apply(key, intern(rule.token()));
      if (on_merge) on_merge(rule);
      rules.push_back(std::move(rule));
    }
    return rules;
  }

 private:
  struct Word {
    std::vector<int> symbols;
    std::int64_t count;
  };

  struct HeapEntry {
    std::int64_t count;
    PairKey key;
  };

  int intern(const std::string& token) {
    auto [it, inserted] =
        ids_.try_emplace(token, static_cast<int>(tokens_.size()));
    if (inserted) tokens_.push_back(token);
    return it->second;
  }

  // True when a should be popped after b (max-heap on count, then smallest
  // (left, right) strings first).
  bool heap_less(const HeapEntry& a, const HeapEntry& b) const {
    if (a.count != b.count) return a.count < b.count;
    const auto& al = tokens_[static_cast<std::size_t>(left_of(a.key))];
    const auto& bl = tokens_[static_cast<std::size_t>(left_of(b.key))];
    if (al != bl) return al > bl;
    return tokens_[static_cast<std::size_t>(right_of(a.key))] >
           tokens_[static_cast<std::size_t>(right_of(b.key))];
  }

  void push(PairKey key) {
    const auto it = counts_.find(key);
    if (it == counts_.end() || it->second <= 0) return;
    heap_.push_back({it->second, key});
    std::push_heap(heap_.begin(), heap_.end(),
                   [this](const HeapEntry& a, const HeapEntry& b) {
                     return heap_less(a, b);
                   });
  }

  // Lazily discards entries whose count no longer matches.
  std::optional<std::pair<PairKey, std::int64_t>> pop_best() {
    const auto cmp = [this](const HeapEntry& a, const HeapEntry& b) {
      return heap_less(a, b);
    };
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), cmp);
      const HeapEntry top = heap_.back();
      heap_.pop_back();
      const auto it = counts_.find(top.key);
      if (it != counts_.end() && it->second == top.count && top.count > 0) {
        return std::make_pair(top.key, top.count);
      }
    }
    return std::nullopt;
  }

  void add_word_pairs(int w, int sign) {
    const Word& word = words_[static_cast<std::size_t>(w)];
    for (std::size_t i = 0; i + 1 < word.symbols.size(); ++i) {
      const PairKey k = key_of(word.symbols[i], word.symbols[i + 1]);
      counts_[k] += sign * word.count;
      if (sign > 0) where_[k].push_back(w);
      touched_.push_back(k);
    }
  }

  void apply(PairKey key, int merged) {
    const int left = left_of(key);
    const int right = right_of(key);
    std::vector<int> affected = std::move(where_[key]);
    where_.erase(key);
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()),
                   affected.end());

    touched_.clear();
    for (int w : affected) {
      auto& symbols = words_[static_cast<std::size_t>(w)].symbols;
      bool present = false;
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
        if (symbols[i] == left && symbols[i + 1] == right) {
          present = true;
          break;
        }
      }
      if (!present) continue;

      add_word_pairs(w, -1);
      std::vector<int> next;
      next.reserve(symbols.size());
      for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i + 1 < symbols.size() && symbols[i] == left &&
            symbols[i + 1] == right) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(symbols[i]);
        }
      }
      symbols = std::move(next);
      add_word_pairs(w, +1);
    }

    std::sort(touched_.begin(), touched_.end());
    touched_.erase(std::unique(touched_.begin(), touched_.end()),
                   touched_.end());
    for (PairKey k : touched_) {
      auto it = counts_.find(k);
      if (it != counts_.end() && it->second == 0) {
        counts_.erase(it);
        where_.erase(k);
        continue;
      }
      push(k);
    }
  }

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
  std::vector<Word> words_;
  std::unordered_map<PairKey, std::int64_t> counts_;
  std::unordered_map<PairKey, std::vector<int>> where_;
  std::vector<HeapEntry> heap_;
  std::vector<PairKey> touched_;
};

}  // namespace

std::vector<MergeRule> learn_merges(
    std::span<const std::vector<std::string>> sequences,
    std::int64_t threshold, std::optional<std::size_t> max_merges,
    const MergeCallback& on_merge) {
  if (threshold < 1) throw Error("threshold must be at least 1");
  if (max_merges && *max_merges == 0) return {};
  MergeLearner learner(sequences);
  return learner.run(threshold, max_merges, on_merge);
}

TrainResult train(std::span<const std::string> corpus,
                  const TrainerConfig& config, const MergeCallback& on_merge) {
  if (corpus.empty()) throw Error("training corpus is empty");

  TrainResult result;
  result.n_input = corpus.size();
  std::vector<std::string> smiles;
  if (config.augment) {
    AugmentResult aug = augment_corpus(corpus, config.augmentation_seed,
                                       config.strict, config.threads);
    result.n_invalid = aug.n_invalid;
    smiles = std::move(aug.smiles);
  } else {
    std::vector<char> ok(corpus.size(), 0);
    parallel_for(corpus.size(), config.threads, [&](std::size_t i) {
      ok[i] = validate_smiles(corpus[i], config.strict).valid ? 1 : 0;
    });
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (ok[i]) {
        smiles.push_back(corpus[i]);
      } else {
        ++result.n_invalid;
      }
    }
  }
  if (smiles.empty()) throw Error("every SMILES in the training corpus is invalid");

  std::vector<std::vector<std::string>> sequences(smiles.size());
  parallel_for(smiles.size(), config.threads,
               [&](std::size_t i) { sequences[i] = atom_units(smiles[i]); });
  for (const auto& seq : sequences) {
    for (const auto& unit : seq) ++result.unit_counts[unit];
  }
  result.n_sequences = sequences.size();
  result.merges =
      learn_merges(sequences, config.threshold, config.max_merges, on_merge);
  return result;
}

std::vector<std::string> vocab_from_merges(
    std::span<const MergeRule> rules, const std::set<std::string>& base_units) {
  std::vector<std::string> vocab(base_units.begin(), base_units.end());
  std::set<std::string> seen(base_units.begin(), base_units.end());
  for (const auto& rule : rules) {
    std::string token = rule.token();
    if (seen.insert(token).second) vocab.push_back(std::move(token));
  }
  return vocab;
}

std::vector<std::pair<std::string, std::int64_t>> report_top_tokens(
    std::span<const MergeRule> rules, std::size_t k) {
  std::vector<const MergeRule*> order;
  order.reserve(rules.size());
  for (const auto& r : rules) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const MergeRule* a, const MergeRule* b) {
                     if (a->learned_frequency != b->learned_frequency) {
                       return a->learned_frequency > b->learned_frequency;
                     }
                     return a->rank < b->rank;
                   });
  std::vector<std::pair<std::string, std::int64_t>> top;
  for (std::size_t i = 0; i < order.size() && i < k; ++i) {
    top.emplace_back(order[i]->token(), order[i]->learned_frequency);
  }
  return top;
}

}  // namespace smipe
