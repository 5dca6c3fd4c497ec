#include "smipe/corpus.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "smipe/error.h"
#include "smipe/parallel.h"
#include "smipe/random.h"

namespace smipe {

namespace {

constexpr double kWeightTolerance = 1e-9;

void check_weights(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0 && w <= 1.0)) {
      throw FormatError("dataset weight " + std::to_string(w) + " is outside (0, 1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightTolerance) {
    throw FormatError("dataset weights sum to " + std::to_string(sum) + ", not 1");
  }
}

}  // namespace

std::string wrap_smiles(std::string_view text, std::span<const TextSpan> spans) {
  std::string out;
  out.reserve(text.size() + spans.size() * (kSmilesOpen.size() + kSmilesClose.size()));
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto [offset, length] = spans[i];
    if (length == 0) throw Error("span " + std::to_string(i) + " is empty");
    if (offset > text.size() || length > text.size() - offset) {
      throw Error("span " + std::to_string(i) + " is out of range");
    }
    if (offset < cursor) {
      throw Error("span " + std::to_string(i) + " overlaps or precedes the previous span");
    }
    out += text.substr(cursor, offset - cursor);
    out += kSmilesOpen;
    out += text.substr(offset, length);
    out += kSmilesClose;
    cursor = offset + length;
  }
  out += text.substr(cursor);
  return out;
}

std::string concat_records(std::span<const std::string> samples) {
  std::string out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i) out += kEos;
    out += samples[i];
  }
  return out;
}

std::vector<DatasetSpec> parse_blend_config(std::string_view json,
                                            const std::filesystem::path& base_dir) {
  std::vector<DatasetSpec> specs;
  try {
    const auto j = nlohmann::json::parse(json);
    if (!j.is_array()) throw FormatError("blend config must be a JSON list");
    std::set<std::string> names;
    for (const auto& e : j) {
      DatasetSpec spec;
      spec.name = e.at("name").get<std::string>();
      spec.path = e.at("path").get<std::string>();
      if (spec.path.is_relative()) spec.path = base_dir / spec.path;
      spec.weight = e.at("weight").get<double>();
      if (e.contains("format")) {
        spec.format = parse_record_format(e.at("format").get<std::string>());
      }
      if (e.contains("field")) spec.field = e.at("field").get<std::string>();
      if (!names.insert(spec.name).second) {
        throw FormatError("duplicate dataset name '" + spec.name + "'");
      }
      specs.push_back(std::move(spec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed blend config: ") + e.what());
  }
  if (specs.empty()) throw FormatError("blend config lists no datasets");
  std::vector<double> weights;
  for (const auto& s : specs) weights.push_back(s.weight);
  check_weights(weights);
  return specs;
}

std::vector<Dataset> load_datasets(std::span<const DatasetSpec> specs,
                                   unsigned threads) {
  std::vector<Dataset> out(specs.size());
  parallel_for(specs.size(), threads, [&](std::size_t i) {
    out[i].name = specs[i].name;
    out[i].weight = specs[i].weight;
    out[i].records = read_records(specs[i].path, specs[i].format, specs[i].field);
    if (out[i].records.empty()) {
      throw Error("dataset '" + specs[i].name + "' (" + specs[i].path.string() +
                  ") has no records");
    }
  });
  return out;
}

std::vector<std::size_t> blend_counts(std::span<const double> weights,
                                      std::size_t total) {
  std::vector<std::size_t> counts(weights.size());
  if (weights.empty()) return counts;
  std::vector<double> remainders(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainders[i] = exact - std::floor(exact);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
    ++counts[order[k % order.size()]];
  }
  return counts;
}

std::string BlendResult::manifest_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [name, count] : manifest) j[name] = count;
  return j.dump(1) + "\n";
}

std::string BlendResult::records_jsonl() const {
  std::string out;
  for (const auto& r : records) {
    out += nlohmann::json{{"text", r}}.dump();
    out += '\n';
  }
  return out;
}

BlendResult blend(std::span<const Dataset> datasets, std::size_t total,
                  std::uint64_t seed) {
  if (datasets.empty()) throw Error("blend needs at least one dataset");
  std::vector<double> weights;
  for (const auto& d : datasets) {
    if (d.records.empty()) throw Error("dataset '" + d.name + "' has no records");
    weights.push_back(d.weight);
  }
  check_weights(weights);
  const auto counts = blend_counts(weights, total);

  BlendResult result;
  std::vector<std::size_t> labels;
  labels.reserve(total);
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    labels.insert(labels.end(), counts[d], d);
    result.manifest.emplace_back(datasets[d].name, counts[d]);
  }
  Rng order_rng(derive_seed(seed, 0));
  fisher_yates(std::span<std::size_t>(labels), order_rng);

  struct Stream {
    Rng rng;
    std::vector<std::size_t> order;
    std::size_t next = 0;
  };
  std::vector<Stream> streams;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    Stream s{Rng(derive_seed(seed, d + 1)), {}, 0};
    s.order.resize(datasets[d].records.size());
    std::iota(s.order.begin(), s.order.end(), 0);
    fisher_yates(std::span<std::size_t>(s.order), s.rng);
    streams.push_back(std::move(s));
  }

  result.records.reserve(total);
  result.sources = labels;
  for (std::size_t d : labels) {
    Stream& s = streams[d];
    if (s.next == s.order.size()) {
      fisher_yates(std::span<std::size_t>(s.order), s.rng);
      s.next = 0;
    }
    result.records.push_back(datasets[d].records[s.order[s.next++]]);
  }
  return result;
}

std::pair<std::size_t, std::size_t> histogram_bucket(std::size_t count) {
  if (count <= 64) return {count, count};
  std::size_t hi = 128;
  while (hi < count) hi *= 2;
  return {hi / 2 + 1, hi};
}

std::size_t lower_median(std::vector<std::size_t> values) {
  if (values.empty()) throw Error("median of an empty sample");
  const std::size_t k = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k),
                   values.end());
  return values[k];
}

FertilityReport fertility_report(std::span<const std::string> corpus,
                                 const TokenCounter& tok_a,
                                 const TokenCounter& tok_b, unsigned threads) {
  if (corpus.empty()) throw Error("fertility report needs a non-empty corpus");
  FertilityReport report;
  report.counts_a.resize(corpus.size());
  report.counts_b.resize(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    report.counts_a[i] = tok_a(corpus[i]);
    report.counts_b[i] = tok_b(corpus[i]);
  });

  report.median_a = lower_median(report.counts_a);
  report.median_b = lower_median(report.counts_b);
  const auto n = static_cast<double>(corpus.size());
  report.single_token_fraction_a =
      static_cast<double>(std::count(report.counts_a.begin(), report.counts_a.end(), 1)) / n;
  report.single_token_fraction_b =
      static_cast<double>(std::count(report.counts_b.begin(), report.counts_b.end(), 1)) / n;

  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>> buckets;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ++buckets[histogram_bucket(report.counts_a[i])].first;
    ++buckets[histogram_bucket(report.counts_b[i])].second;
  }
  for (const auto& [range, c] : buckets) {
    report.histogram.push_back({range.first, range.second, c.first, c.second});
  }
  return report;
}

std::string FertilityReport::to_json() const {
  nlohmann::ordered_json j;
  j["n_strings"] = counts_a.size();
  j["median_a"] = median_a;
  j["median_b"] = median_b;
  j["single_token_fraction_a"] = single_token_fraction_a;
  j["single_token_fraction_b"] = single_token_fraction_b;
  auto hist = nlohmann::ordered_json::array();
  for (const auto& b : histogram) {
    hist.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count_a", b.count_a},
                    {"count_b", b.count_b}});
  }
  j["histogram"] = std::move(hist);
  return j.dump(1) + "\n";
}

std::string FertilityReport::histogram_tsv() const {
  std::string out = "lo\thi\tcount_a\tcount_b\n";
  for (const auto& b : histogram) {
    out += std::to_string(b.lo) + '\t' + std::to_string(b.hi) + '\t' +
           std::to_string(b.count_a) + '\t' + std::to_string(b.count_b) + '\n';
  }
  return out;
}

}  // namespace smipe
