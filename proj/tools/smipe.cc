// Command-line front end: one subcommand per pipeline stage.
//
// Exit codes: 0 success, 1 invalid input data, 2 usage error. Results go to
// standard output or --out; diagnostics go to standard error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "smipe/base_tokenizer.h"
#include "smipe/corpus.h"
#include "smipe/document.h"
#include "smipe/embedding.h"
#include "smipe/error.h"
#include "smipe/fingerprint.h"
#include "smipe/io.h"
#include "smipe/metrics.h"
#include "smipe/parallel.h"
#include "smipe/pretokenizer.h"
#include "smipe/random.h"
#include "smipe/smiles.h"
#include "smipe/tokenizer.h"
#include "smipe/trainer.h"
#include "smipe/vocab_extension.h"

namespace {

using namespace smipe;

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
  bool quiet = false;
};

struct Input {
  std::string path = "-";
  std::string format = "lines";
  std::string field;

  void add_to(CLI::App* cmd, std::string default_field) {
    field = std::move(default_field);
    cmd->add_option("--in", path, "Input file, '-' for standard input")
        ->capture_default_str();
    cmd->add_option("--format", format, "Record format")
        ->check(CLI::IsMember({"lines", "jsonl"}))
        ->capture_default_str();
    cmd->add_option("--field", field, "JSONL field holding the record")
        ->capture_default_str();
  }

  std::vector<std::string> read() const {
    const auto fmt = parse_record_format(format);
    if (path == "-") return read_records(std::cin, fmt, field);
    return read_records(std::filesystem::path(path), fmt, field);
  }
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void emit(const std::string& out_path, std::string_view data) {
  if (out_path.empty() || out_path == "-") {
    std::cout << data;
    std::cout.flush();
  } else {
    write_file(out_path, data);
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// A vocab file as-is, one escaped token per line.
Vocabulary read_vocab_file(const std::filesystem::path& path) {
  std::vector<std::string> tokens;
  for (const auto& line : read_lines(path)) {
    if (!line.empty()) tokens.push_back(unescape_token(line));
  }
  return Vocabulary(std::move(tokens));
}

// "token\tfreq" per line, tokens escaped as in vocab files.
std::vector<TokenCount> read_token_counts(const std::filesystem::path& path) {
  std::vector<TokenCount> out;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    try {
      if (tab == std::string::npos) throw std::invalid_argument("missing tab");
      out.emplace_back(unescape_token(line.substr(0, tab)),
                       std::stoll(line.substr(tab + 1)));
    } catch (const std::logic_error&) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected '<token>\\t<count>'");
    }
  }
  return out;
}

std::vector<TokenId> parse_ids(std::string_view line, std::size_t line_no) {
  std::vector<TokenId> ids;
  std::istringstream in{std::string(line)};
  std::string word;
  while (in >> word) {
    try {
      std::size_t used = 0;
      const long v = std::stol(word, &used);
      if (used != word.size()) throw std::invalid_argument(word);
      ids.push_back(static_cast<TokenId>(v));
    } catch (const std::logic_error&) {
      throw FormatError("line " + std::to_string(line_no) + ": bad token id '" +
                        word + "'");
    }
  }
  return ids;
}

std::string join_ids(std::span<const TokenId> ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(ids[i]);
  }
  return out;
}

struct BaseFiles {
  std::string vocab;
  std::string merges;

  void add_to(CLI::App* cmd, bool required) {
    auto* v = cmd->add_option("--base-vocab", vocab, "Base tokenizer vocab file");
    auto* m = cmd->add_option("--base-merges", merges, "Base tokenizer merges file");
    if (required) {
      v->required();
      m->required();
    } else {
      v->needs(m);
      m->needs(v);
    }
  }
  bool given() const { return !vocab.empty(); }
  BaseTokenizer load() const { return BaseTokenizer::load(vocab, merges); }
};

int run(int argc, char** argv) {
  CLI::App app{"SMILES pair-encoding tokenizer toolkit"};
  app.name("smipe");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  // validate
  auto* validate = app.add_subcommand("validate", "Report SMILES validity per record");
  Input validate_in;
  validate_in.add_to(validate, "smiles");
  bool validate_strict = false;
  validate->add_flag("--strict", validate_strict, "Also check default valences");
  validate->callback([&] {
    const auto records = validate_in.read();
    std::vector<ValidityReport> reports(records.size());
    parallel_for(records.size(), g.threads, [&](std::size_t i) {
      reports[i] = validate_smiles(records[i], validate_strict);
    });
    std::string out;
    std::size_t n_invalid = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      out += records[i];
      if (reports[i].valid) {
        out += "\tvalid\n";
        continue;
      }
      ++n_invalid;
      out += "\tinvalid\t";
      out += to_string(*reports[i].error_kind);
      out += '\t';
      out += std::to_string(reports[i].error_position.value_or(0));
      out += '\n';
    }
    std::cout << out;
    if (!g.quiet) {
      std::cerr << records.size() << " records, " << n_invalid << " invalid\n";
    }
  });

  // canon
  auto* canon = app.add_subcommand("canon", "Write canonical SMILES");
  Input canon_in;
  canon_in.add_to(canon, "smiles");
  canon->callback([&] {
    const auto records = canon_in.read();
    std::vector<std::string> out(records.size());
    parallel_for(records.size(), g.threads, [&](std::size_t i) {
      try {
        out[i] = write_canonical(parse_smiles(records[i]));
      } catch (const SmilesError& e) {
        throw Error("record " + std::to_string(i + 1) + ": " + e.what());
      }
    });
    for (const auto& s : out) std::cout << s << '\n';
  });

  // randomize
  auto* randomize = app.add_subcommand("randomize", "Write randomized SMILES");
  Input randomize_in;
  randomize_in.add_to(randomize, "smiles");
  std::size_t randomize_count = 1;
  randomize->add_option("--count", randomize_count, "Variants per record")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  randomize->callback([&] {
    const auto records = randomize_in.read();
    std::vector<std::string> out(records.size());
    parallel_for(records.size(), g.threads, [&](std::size_t i) {
      Molecule m;
      try {
        m = parse_smiles(records[i]);
      } catch (const SmilesError& e) {
        throw Error("record " + std::to_string(i + 1) + ": " + e.what());
      }
      for (std::size_t k = 0; k < randomize_count; ++k) {
        out[i] += write_random(m, derive_seed(g.seed, i * randomize_count + k));
        out[i] += '\n';
      }
    });
    for (const auto& s : out) std::cout << s;
  });

  // pretokenize
  auto* pretokenize = app.add_subcommand("pretokenize", "Split SMILES into atom-level units");
  Input pretokenize_in;
  pretokenize_in.add_to(pretokenize, "smiles");
  pretokenize->callback([&] {
    const auto records = pretokenize_in.read();
    for (std::size_t i = 0; i < records.size(); ++i) {
      std::vector<std::string> units;
      try {
        units = atom_units(records[i]);
      } catch (const SmilesError& e) {
        throw Error("record " + std::to_string(i + 1) + ": " + e.what());
      }
      std::string line;
      for (std::size_t k = 0; k < units.size(); ++k) {
        if (k) line += ' ';
        line += units[k];
      }
      std::cout << line << '\n';
    }
  });

  // train
  auto* train_cmd = app.add_subcommand("train", "Learn merge rules from a SMILES corpus");
  Input train_in;
  train_in.add_to(train_cmd, "smiles");
  TrainerConfig train_cfg;
  std::optional<std::size_t> max_merges;
  std::string train_out;
  std::size_t train_top = 0;
  train_cmd->add_option("--threshold", train_cfg.threshold,
                        "Merge while the best pair occurs more than this many times")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_flag("--augment,!--no-augment", train_cfg.augment,
                      "Add one randomized variant per valid SMILES")
      ->capture_default_str();
  train_cmd->add_option("--max-merges", max_merges, "Stop after this many merges");
  train_cmd->add_flag("--strict", train_cfg.strict, "Filter with the valence check");
  train_cmd->add_option("--out", train_out, "Model file")->required();
  train_cmd->add_option("--top", train_top, "Print the top-k learned tokens to stderr");
  train_cmd->callback([&] {
    train_cfg.max_merges = max_merges;
    train_cfg.augmentation_seed = g.seed;
    train_cfg.threads = g.threads;
    const auto corpus = train_in.read();
    MergeCallback log;
    if (!g.quiet) {
      log = [](const MergeRule& r) {
        std::cerr << "merge " << r.rank << ' ' << r.left << '+' << r.right
                  << " freq=" << r.learned_frequency << '\n';
      };
    }
    auto result = train(corpus, train_cfg, log);
    std::set<std::string> units;
    for (const auto& [u, c] : result.unit_counts) units.insert(u);
    const auto model = TokenizerModel::build(result.merges, units);
    model.save(train_out);
    if (!g.quiet) {
      std::cerr << "read " << result.n_input << " records, dropped "
                << result.n_invalid << " invalid, trained on "
                << result.n_sequences << " sequences; " << result.unit_counts.size()
                << " base units, " << result.merges.size() << " merges, vocabulary "
                << model.vocabulary().size() << '\n';
      for (const auto& [token, freq] : report_top_tokens(result.merges, train_top)) {
        std::cerr << token << '\t' << freq << '\n';
      }
    }
  });

  // encode
  auto* encode = app.add_subcommand("encode", "Encode SMILES (or documents) to token ids");
  std::string encode_model;
  Input encode_in;
  encode_in.add_to(encode, "smiles");
  BaseFiles encode_base;
  encode_base.add_to(encode, false);
  bool encode_tokens = false;
  encode->add_option("--model", encode_model, "Model file")->required();
  encode->add_flag("--tokens", encode_tokens, "Print token strings instead of ids");
  encode->callback([&] {
    const auto model = TokenizerModel::load(encode_model);
    const auto records = encode_in.read();
    std::optional<BaseTokenizer> base;
    std::optional<DocumentCodec> codec;
    if (encode_base.given()) {
      base.emplace(encode_base.load());
      codec.emplace(model, *base);
    }
    const Vocabulary& vocab = codec ? codec->vocabulary() : model.vocabulary();
    std::vector<std::string> out(records.size());
    parallel_for(records.size(), g.threads, [&](std::size_t i) {
      std::vector<TokenId> ids;
      try {
        ids = codec ? codec->encode(records[i]) : model.encode_smiles(records[i]);
      } catch (const Error& e) {
        throw Error("record " + std::to_string(i + 1) + ": " + e.what());
      }
      if (!encode_tokens) {
        out[i] = join_ids(ids);
        return;
      }
      for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k) out[i] += ' ';
        out[i] += escape_token(vocab.token(ids[k]));
      }
    });
    for (const auto& line : out) std::cout << line << '\n';
  });

  // decode
  auto* decode = app.add_subcommand("decode", "Decode lines of token ids");
  std::string decode_model;
  std::string decode_path = "-";
  BaseFiles decode_base;
  decode_base.add_to(decode, false);
  decode->add_option("--model", decode_model, "Model file")->required();
  decode->add_option("--in", decode_path, "Input file, '-' for standard input");
  decode->callback([&] {
    const auto model = TokenizerModel::load(decode_model);
    std::optional<BaseTokenizer> base;
    std::optional<DocumentCodec> codec;
    if (decode_base.given()) {
      base.emplace(decode_base.load());
      codec.emplace(model, *base);
    }
    std::ifstream file;
    std::istream* in = &std::cin;
    if (decode_path != "-") {
      file.open(decode_path);
      if (!file) throw Error("cannot open '" + decode_path + "'");
      in = &file;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(*in, line)) {
      ++line_no;
      const auto ids = parse_ids(line, line_no);
      std::cout << (codec ? codec->decode(ids) : model.decode(ids)) << '\n';
    }
  });

  // extract-oov
  auto* oov = app.add_subcommand("extract-oov",
                                 "Count words the base tokenizer fragments");
  Input oov_in;
  oov_in.format = "jsonl";
  oov_in.add_to(oov, "text");
  BaseFiles oov_base;
  oov_base.add_to(oov, true);
  std::size_t oov_k = 1000;
  std::string oov_out;
  oov->add_option("--k", oov_k, "Number of words to keep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  oov->add_option("--out", oov_out, "Output TSV (word, count)");
  oov->callback([&] {
    const auto base = oov_base.load();
    const auto corpus = oov_in.read();
    std::string out;
    for (const auto& [word, count] : extract_text_oov(corpus, base, oov_k, g.threads)) {
      out += escape_token(word) + '\t' + std::to_string(count) + '\n';
    }
    emit(oov_out, out);
  });

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Build a vocabulary extension plan");
  std::string plan_model;
  std::string plan_text;
  std::string plan_base_vocab;
  std::string plan_out;
  std::vector<std::string> plan_specials = kDefaultSpecialTokens;
  bool plan_atom_units = true;
  plan_cmd->add_option("--model", plan_model, "Trained SMILES model")->required();
  plan_cmd->add_option("--text-oov", plan_text, "TSV from extract-oov");
  plan_cmd->add_option("--base-vocab", plan_base_vocab, "Base vocab file")->required();
  plan_cmd->add_option("--specials", plan_specials, "Special tokens to add")
      ->capture_default_str();
  plan_cmd->add_flag("--atom-units,!--no-atom-units", plan_atom_units,
                     "Include single atom-level units from the model (default on)");
  plan_cmd->add_option("--out", plan_out, "Plan file");
  plan_cmd->callback([&] {
    const auto model = TokenizerModel::load(plan_model);
    const auto base = read_vocab_file(plan_base_vocab);
    std::map<std::string, std::int64_t> learned;
    for (const auto& r : model.merges()) learned.emplace(r.token(), r.learned_frequency);
    std::vector<TokenCount> smiles_tokens;
    for (const auto& t : model.vocabulary().tokens()) {
      if (model.vocabulary().is_special(t)) continue;
      const auto it = learned.find(t);
      smiles_tokens.emplace_back(t, it == learned.end() ? 0 : it->second);
    }
    std::vector<TokenCount> text_tokens;
    if (!plan_text.empty()) text_tokens = read_token_counts(plan_text);
    const auto plan = build_extension_plan(smiles_tokens, text_tokens, plan_specials,
                                           base, {plan_atom_units});
    emit(plan_out, plan.to_json());
    if (!g.quiet) {
      std::cerr << plan.entries.size() << " new tokens, "
                << plan.collisions_dropped.size() << " already in the base vocabulary\n";
    }
  });

  // extend-emb
  auto* extend = app.add_subcommand("extend-emb", "Append mean rows for planned tokens");
  std::string extend_in;
  std::string extend_plan;
  std::string extend_out;
  extend->add_option("--in", extend_in, "EMB1 matrix")->required();
  extend->add_option("--plan", extend_plan, "Plan file")->required();
  extend->add_option("--out", extend_out, "Output EMB1 matrix")->required();
  extend->callback([&] {
    const auto plan = ExtensionPlan::from_json(read_file(extend_plan));
    const auto extended = extend_embeddings(EmbeddingMatrix::load(extend_in), plan);
    extended.save(extend_out);
    if (!g.quiet) {
      std::cerr << extended.rows() << " x " << extended.cols() << " written\n";
    }
  });

  // fps
  auto* fps = app.add_subcommand("fps", "Hex-encoded circular fingerprints");
  Input fps_in;
  fps_in.add_to(fps, "smiles");
  int fps_radius = kDefaultRadius;
  std::size_t fps_bits = kDefaultBits;
  fps->add_option("--radius", fps_radius, "Fingerprint radius")->check(CLI::NonNegativeNumber)->capture_default_str();
  fps->add_option("--nbits", fps_bits, "Fingerprint length in bits, a power of two of at least 64")->capture_default_str();
  fps->callback([&] {
    const auto records = fps_in.read();
    std::vector<std::string> out(records.size());
    parallel_for(records.size(), g.threads, [&](std::size_t i) {
      try {
        out[i] = morgan_fingerprint(parse_smiles(records[i]), fps_radius, fps_bits).to_hex();
      } catch (const SmilesError& e) {
        throw Error("record " + std::to_string(i + 1) + ": " + e.what());
      }
    });
    for (const auto& s : out) std::cout << s << '\n';
  });

  // sim
  auto* sim = app.add_subcommand("sim", "Tanimoto similarity of paired SMILES files");
  std::string sim_a;
  std::string sim_b;
  int sim_radius = kDefaultRadius;
  std::size_t sim_bits = kDefaultBits;
  sim->add_option("a", sim_a, "First SMILES file")->required();
  sim->add_option("b", sim_b, "Second SMILES file")->required();
  sim->add_option("--radius", sim_radius, "Fingerprint radius")->check(CLI::NonNegativeNumber)->capture_default_str();
  sim->add_option("--nbits", sim_bits, "Fingerprint length in bits, a power of two of at least 64")->capture_default_str();
  sim->callback([&] {
    const auto a = read_records(std::filesystem::path(sim_a), RecordFormat::kLines, "");
    const auto b = read_records(std::filesystem::path(sim_b), RecordFormat::kLines, "");
    if (a.size() != b.size()) {
      throw Error("files have " + std::to_string(a.size()) + " and " +
                  std::to_string(b.size()) + " records");
    }
    std::vector<double> sims(a.size());
    parallel_for(a.size(), g.threads, [&](std::size_t i) {
      try {
        sims[i] = tanimoto(morgan_fingerprint(parse_smiles(a[i]), sim_radius, sim_bits),
                           morgan_fingerprint(parse_smiles(b[i]), sim_radius, sim_bits));
      } catch (const SmilesError& e) {
        throw Error("pair " + std::to_string(i + 1) + ": " + e.what());
      }
    });
    for (double s : sims) std::cout << format_double(s) << '\n';
  });

  // score
  auto* score = app.add_subcommand("score", "Score model outputs against gold SMILES");
  std::string score_task_name;
  std::string score_in = "-";
  std::string score_per_record;
  std::string score_match = "canonical";
  std::string score_invalid = "zero";
  ScoreOptions score_opts;
  score->add_option("--task", score_task_name, "Task type")
      ->required()
      ->check(CLI::IsMember({"generation"}));
  score->add_option("--in", score_in, "JSONL of {output, gold}")->capture_default_str();
  score->add_option("--per-record", score_per_record, "Per-record TSV output");
  score->add_option("--match", score_match, "Exact-match comparison")
      ->check(CLI::IsMember({"canonical", "raw"}))
      ->capture_default_str();
  score->add_option("--invalid-fps", score_invalid, "Invalid predictions in the mean")
      ->check(CLI::IsMember({"zero", "exclude"}))
      ->capture_default_str();
  score->add_flag("--open-tag-in-prompt", score_opts.open_tag_in_prompt,
                  "Outputs continue a prompt that already opened the tag");
  score->add_flag("--strict", score_opts.strict, "Apply the valence check");
  score->add_option("--radius", score_opts.radius, "Fingerprint radius")->check(CLI::NonNegativeNumber)->capture_default_str();
  score->add_option("--nbits", score_opts.nbits, "Fingerprint length in bits, a power of two of at least 64")->capture_default_str();
  score->callback([&] {
    score_opts.match = parse_match_mode(score_match);
    score_opts.invalid_fps = parse_invalid_fps_mode(score_invalid);
    score_opts.threads = g.threads;
    std::vector<GenerationRecord> records;
    if (score_in == "-") {
      records = read_generation_records(std::cin);
    } else {
      std::istringstream in(read_file(score_in));
      records = read_generation_records(in);
    }
    const auto result = score_task(records, score_opts);
    std::cout << result.score.to_json() << '\n';
    if (!score_per_record.empty()) {
      write_file(score_per_record, per_record_tsv(result.records));
    }
  });

  // blend
  auto* blend_cmd = app.add_subcommand("blend", "Sample a weighted mixture of datasets");
  std::string blend_config;
  std::size_t blend_total = 0;
  std::string blend_out;
  std::string blend_manifest;
  blend_cmd->add_option("--config", blend_config, "JSON list of datasets")->required();
  blend_cmd->add_option("--total", blend_total, "Records to emit")->required();
  blend_cmd->add_option("--out", blend_out, "Output JSONL");
  blend_cmd->add_option("--manifest", blend_manifest, "Manifest JSON");
  blend_cmd->callback([&] {
    const std::filesystem::path config_path(blend_config);
    const auto specs = parse_blend_config(read_file(config_path), config_path.parent_path());
    const auto datasets = load_datasets(specs, g.threads);
    const auto result = blend(datasets, blend_total, g.seed);
    emit(blend_out, result.records_jsonl());
    if (!blend_manifest.empty()) {
      write_file(blend_manifest, result.manifest_json());
    } else if (!g.quiet) {
      std::cerr << result.manifest_json();
    }
  });

  // wrap
  auto* wrap = app.add_subcommand("wrap", "Tag SMILES spans and join records with <EOS>");
  std::string wrap_in = "-";
  std::string wrap_out;
  std::size_t wrap_group = 1;
  wrap->add_option("--in", wrap_in, "JSONL of {text, spans: [[offset, length], ...]}")
      ->capture_default_str();
  wrap->add_option("--out", wrap_out, "Output JSONL of {text}");
  wrap->add_option("--group", wrap_group, "Records joined per output record")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  wrap->callback([&] {
    std::istringstream in(wrap_in == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                         : read_file(wrap_in));
    std::vector<std::string> wrapped;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::string text;
      std::vector<TextSpan> spans;
      try {
        const auto j = nlohmann::json::parse(line);
        text = j.at("text").get<std::string>();
        if (j.contains("spans")) {
          for (const auto& s : j.at("spans")) {
            spans.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
          }
        }
      } catch (const nlohmann::json::exception& e) {
        throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
      }
      try {
        wrapped.push_back(wrap_smiles(text, spans));
      } catch (const Error& e) {
        throw Error("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    std::string out;
    for (std::size_t i = 0; i < wrapped.size(); i += wrap_group) {
      const std::size_t end = std::min(wrapped.size(), i + wrap_group);
      const std::span<const std::string> group(wrapped.data() + i, end - i);
      out += nlohmann::json{{"text", concat_records(group)}}.dump();
      out += '\n';
    }
    emit(wrap_out, out);
  });

  // fertility
  auto* fertility = app.add_subcommand("fertility", "Tokens per SMILES under two tokenizers");
  Input fertility_in;
  fertility_in.add_to(fertility, "smiles");
  std::string fertility_model;
  std::string fertility_baseline = "atom";
  BaseFiles fertility_base;
  fertility_base.add_to(fertility, false);
  std::string fertility_out;
  std::string fertility_tsv;
  fertility->add_option("--model", fertility_model, "Model for tokenizer B")->required();
  fertility->add_option("--baseline", fertility_baseline,
                        "Tokenizer A: atom-level units or the base tokenizer")
      ->check(CLI::IsMember({"atom", "base"}))
      ->capture_default_str();
  fertility->add_option("--out", fertility_out, "Report JSON");
  fertility->add_option("--tsv", fertility_tsv, "Histogram TSV");
  fertility->callback([&] {
    const auto model = TokenizerModel::load(fertility_model);
    const auto corpus = fertility_in.read();
    std::optional<BaseTokenizer> base;
    TokenCounter tok_a = [](std::string_view s) { return atom_units(s).size(); };
    if (fertility_baseline == "base") {
      if (!fertility_base.given()) {
        throw CLI::ValidationError("--baseline base needs --base-vocab and --base-merges");
      }
      base.emplace(fertility_base.load());
      tok_a = [&base](std::string_view s) { return base->encode(s).size(); };
    }
    const TokenCounter tok_b = [&model](std::string_view s) {
      return model.encode_smiles(s).size();
    };
    const auto report = fertility_report(corpus, tok_a, tok_b, g.threads);
    emit(fertility_out, report.to_json());
    if (!fertility_tsv.empty()) write_file(fertility_tsv, report.histogram_tsv());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << "smipe: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "smipe: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "smipe: " << e.what() << '\n';
    return 1;
  }
}
