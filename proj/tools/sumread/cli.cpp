#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "sumread/corpus.hpp"
#include "sumread/dpo.hpp"
#include "sumread/error.hpp"
#include "sumread/gradcheck.hpp"
#include "sumread/interchange.hpp"
#include "sumread/metrics.hpp"
#include "sumread/pairbuilder.hpp"
#include "sumread/prompting.hpp"
#include "sumread/report.hpp"
#include "sumread/toy_policy.hpp"

namespace sumread::cli {
namespace {

namespace fs = std::filesystem;

/// Input that exists but cannot be used.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write '" + path + "'");
  return out;
}

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// --- ingest ----------------------------------------------------------------

struct IngestOptions {
  std::string format;
  std::vector<std::string> inputs;
  std::string out = "instances.jsonl";
  std::string split = "train";
  bool filter = false;
  bool raw_match = false;
  bool any_answer = false;
  bool strict = false;
  std::vector<double> split_ratios;
  std::uint64_t seed = 0;
  std::string errors_path;
};

int cmd_ingest(const IngestOptions& o, std::ostream& out, std::ostream& err) {
  const Split split = parse_split(o.split);
  const ErrorMode mode = o.strict ? ErrorMode::strict : ErrorMode::collect;

  std::vector<QaInstance> instances;
  std::vector<RecordError> errors;
  for (const auto& path : o.inputs) {
    auto in = open_in(path);
    auto parsed = o.format == "squad" ? parse_squad(in, split, mode) : parse_retrieved(in, split, mode);
    instances.insert(instances.end(), std::make_move_iterator(parsed.items.begin()),
                     std::make_move_iterator(parsed.items.end()));
    for (auto& e : parsed.errors) {
      if (o.inputs.size() > 1) e.message = path + ": " + e.message;
      errors.push_back(std::move(e));
    }
  }
  {
    std::set<std::string> ids;
    for (const auto& inst : instances) {
      if (!ids.insert(inst.id).second) throw DataError("duplicate id '" + inst.id + "' across input files");
    }
  }
  for (const auto& e : errors) err << "record error: " << RecordErrorException::describe(e) << '\n';
  if (!o.errors_path.empty()) {
    auto ef = open_out(o.errors_path);
    for (const auto& e : errors) {
      ef << "{\"record\":\"" << e.record << "\",\"line\":" << e.line << ",\"message\":"
         << std::quoted(e.message) << "}\n";
    }
  }
  out << "parsed " << instances.size() << " instances, " << errors.size() << " record errors\n";

  if (o.filter) {
    ContainmentOptions copt;
    copt.normalize = !o.raw_match;
    copt.policy = o.any_answer ? AnswerPolicy::any : AnswerPolicy::first;
    auto filtered = filter_answer_in_context(instances, copt);
    out << "filter " << io::stats_json(filtered.stats) << '\n';
    instances = std::move(filtered.kept);
  }

  if (!o.split_ratios.empty()) {
    if (o.split_ratios.size() != 2) throw ArgumentError("--split-ratios takes train,validation");
    auto parts = split_dataset(instances, {o.split_ratios[0], o.split_ratios[1]}, o.seed);
    out << "split train=" << parts.train.size() << " validation=" << parts.validation.size()
        << " test=" << parts.test.size() << '\n';
    instances.clear();
    for (auto* part : {&parts.train, &parts.validation, &parts.test}) {
      instances.insert(instances.end(), part->begin(), part->end());
    }
  }

  auto f = open_out(o.out);
  io::write_instances(f, instances);
  out << "wrote " << instances.size() << " instances to " << o.out << '\n';
  return kExitOk;
}

// --- prompts ---------------------------------------------------------------

struct PromptsOptions {
  std::string instances;
  std::vector<std::string> types{"1", "2", "3"};
  std::string context_from;
  std::string context_kind = "summary";
  std::size_t answer_index = 0;
  std::string out = "prompts.jsonl";
};

int cmd_prompts(const PromptsOptions& o, std::ostream& out, std::ostream& err) {
  auto in = open_in(o.instances);
  const auto instances = io::read_instances(in);

  std::vector<PromptKind> kinds;
  for (const auto& t : o.types) kinds.push_back(parse_prompt_kind(t));

  std::map<std::string, std::string, std::less<>> contexts;
  if (!o.context_from.empty()) {
    auto cin = open_in(o.context_from);
    contexts = io::outputs_of_kind(io::read_outputs(cin), o.context_kind);
  }

  std::vector<PromptRecord> prompts;
  std::size_t missing = 0;
  for (const auto& inst : instances) {
    for (PromptKind k : kinds) {
      if (k != PromptKind::reader) {
        prompts.push_back(render_summarizer_prompt(inst, k, o.answer_index));
        continue;
      }
      std::string_view ctx = inst.context;
      if (!o.context_from.empty()) {
        const auto it = contexts.find(inst.id);
        if (it == contexts.end() || is_blank(it->second)) {
          ++missing;
          continue;
        }
        ctx = it->second;
      }
      prompts.push_back(render_reader_prompt(inst.question, ctx, inst.id));
    }
  }
  if (missing > 0) err << "skipped " << missing << " reader prompts without a '" << o.context_kind << "' context\n";

  auto f = open_out(o.out);
  io::write_prompts(f, prompts);
  out << "wrote " << prompts.size() << " prompts to " << o.out << '\n';
  return kExitOk;
}

// --- pairs / validate ------------------------------------------------------

struct PairsOptions {
  std::string instances;
  std::string outputs;
  std::string variant = "o1_vs_o2";
  std::string out;
};

int cmd_pairs(const PairsOptions& o, std::ostream& out, std::ostream&) {
  auto in = open_in(o.instances);
  const auto instances = io::read_instances(in);
  auto oin = open_in(o.outputs);
  const auto table = io::summary_outputs(io::read_outputs(oin));

  PairBuildStats stats;
  std::string path = o.out;
  if (o.variant == "sft") {
    auto built = build_sft_dataset(instances, table);
    if (path.empty()) path = "sft.jsonl";
    auto f = open_out(path);
    io::write_sft(f, built.items);
    stats = built.stats;
  } else {
    auto built = build_dpo_dataset(instances, table, parse_variant(o.variant));
    if (path.empty()) path = "pairs.jsonl";
    auto f = open_out(path);
    io::write_pairs(f, built.items);
    stats = built.stats;
  }
  out << "pairs " << io::stats_json(stats) << '\n';
  out << "wrote " << stats.built << " records to " << path << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& pairs_path, std::ostream& out, std::ostream&) {
  auto in = open_in(pairs_path);
  const auto file = io::read_pairs(in);
  const auto report = validate_pairs(file.pairs, file.lines);
  for (const auto& issue : report.issues) {
    out << to_string(issue.kind) << " id='" << issue.id << "' lines=";
    for (std::size_t i = 0; i < issue.lines.size(); ++i) out << (i ? "," : "") << issue.lines[i];
    out << ": " << issue.message << '\n';
  }
  out << "checked " << report.checked << " pairs, " << report.issues.size() << " issues\n";
  return report.ok() ? kExitOk : kExitData;
}

// --- score / report --------------------------------------------------------

struct ScoreOptions {
  std::string instances;
  std::string outputs;
  std::string prediction_kind = "reader";
  std::string contexts;
  std::string context_kind;
  std::vector<std::string> baselines;
  std::string model;
  std::string tokenizer = "whitespace";
  bool ira_raw = false;
  bool ira_any = false;
  std::string out_dir = ".";
};

int cmd_score(const ScoreOptions& o, std::ostream& out, std::ostream& err) {
  auto in = open_in(o.instances);
  const auto instances = io::read_instances(in);
  auto oin = open_in(o.outputs);
  const auto records = io::read_outputs(oin);
  if (records.empty()) throw DataError("outputs file '" + o.outputs + "' is empty");

  const auto predictions = io::outputs_of_kind(records, o.prediction_kind);
  if (predictions.empty()) throw DataError("no outputs of kind '" + o.prediction_kind + "'");

  std::map<std::string, std::string, std::less<>> contexts;
  if (!o.context_kind.empty()) {
    if (o.contexts.empty()) {
      contexts = io::outputs_of_kind(records, o.context_kind);
    } else {
      auto cin = open_in(o.contexts);
      contexts = io::outputs_of_kind(io::read_outputs(cin), o.context_kind);
    }
  }

  const auto counter = make_token_counter(o.tokenizer);
  sumread::ScoreOptions sopt;
  sopt.ira.normalize = !o.ira_raw;
  sopt.ira.policy = o.ira_any ? AnswerPolicy::any : AnswerPolicy::first;

  std::vector<ScoreRow> rows;
  std::size_t no_prediction = 0, no_context = 0;
  for (const auto& inst : instances) {
    const auto p = predictions.find(inst.id);
    if (p == predictions.end()) {
      ++no_prediction;
      continue;
    }
    std::string_view ctx = inst.context;
    if (!o.context_kind.empty()) {
      const auto c = contexts.find(inst.id);
      if (c == contexts.end() || counter->count(c->second) == 0) {
        ++no_context;
        continue;
      }
      ctx = c->second;
    }
    rows.push_back(score_instance(inst.id, p->second, inst.answers, ctx, *counter, sopt));
  }
  if (no_prediction > 0) err << "skipped " << no_prediction << " instances without a prediction\n";
  if (no_context > 0) err << "skipped " << no_context << " instances without a usable context\n";
  if (rows.empty()) throw DataError("nothing to score: no instance has both a prediction and a context");

  std::vector<AggregateReport> baselines;
  for (const auto& path : o.baselines) {
    auto bin = open_in(path);
    baselines.push_back(io::read_report_json(bin));
  }
  const std::string model = o.model.empty() ? o.prediction_kind : o.model;
  const auto report = aggregate(rows, model, baselines);

  const fs::path dir(o.out_dir);
  {
    auto f = open_out((dir / "scores.jsonl").string());
    io::write_scores(f, rows);
  }
  const AggregateReport single[] = {report};
  {
    auto f = open_out((dir / "report.md").string());
    f << render_markdown(single);
  }
  {
    auto f = open_out((dir / "report.csv").string());
    f << render_csv(single);
  }
  {
    auto f = open_out((dir / "report.json").string());
    io::write_report_json(f, report);
  }
  out << render_markdown(single);
  for (const auto& p : report.retention) {
    out << "retention " << describe_retention(p) << " (length_fraction=" << fmt(p.length_fraction, 4)
        << ", em_retention=" << fmt(p.em_retention, 4) << ")\n";
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& runs, const std::string& md, const std::string& csv,
               std::ostream& out) {
  std::vector<AggregateReport> reports;
  for (const auto& path : runs) {
    auto in = open_in(path);
    reports.push_back(io::read_report_json(in));
  }
  if (!md.empty()) {
    auto f = open_out(md);
    f << render_markdown(reports);
  }
  if (!csv.empty()) {
    auto f = open_out(csv);
    f << render_csv(reports);
  }
  out << render_markdown(reports);
  return kExitOk;
}

// --- dpo-eval --------------------------------------------------------------

struct DpoEvalOptions {
  std::string logprobs;
  std::optional<double> beta;
  bool length_normalize = false;
  std::string out = "dpo_eval.json";
};

int cmd_dpo_eval(const DpoEvalOptions& o, std::ostream& out, std::ostream&) {
  auto in = open_in(o.logprobs);
  const auto file = io::read_logprobs(in);
  if (file.pairs.empty()) throw DataError("logprobs file has no pairs");
  const double beta = o.beta.value_or(file.beta.value_or(dpo::kDefaultBeta));
  const auto norm = o.length_normalize ? dpo::LengthNorm::per_token : dpo::LengthNorm::none;
  const auto report = dpo::evaluate_pairs(file.pairs, beta, norm);
  auto f = open_out(o.out);
  io::write_loss_report(f, report, beta, norm);
  io::write_loss_report(out, report, beta, norm);
  return kExitOk;
}

// --- toy training ----------------------------------------------------------

struct TrainOptions {
  std::string mode = "dpo";
  std::string data;
  std::optional<std::size_t> steps;
  std::optional<double> lr;
  std::optional<double> beta;
  std::uint64_t seed = 1;
  std::size_t buckets = toy::kDefaultBuckets;
  std::size_t vocab_size = toy::kDefaultVocab;
  std::size_t batch_size = 0;
  std::size_t max_tokens = 16;
  std::string init_checkpoint;
  std::string checkpoint = "toy_policy.json";
  std::string trace = "trace.csv";
};

int cmd_train_toy(const TrainOptions& o, std::ostream& out, std::ostream&) {
  auto config = toy::default_config(toy::parse_train_mode(o.mode));
  if (o.steps) config.steps = *o.steps;
  if (o.lr) config.learning_rate = *o.lr;
  if (o.beta) config.beta = *o.beta;
  config.seed = o.seed;
  config.batch_size = o.batch_size;

  std::optional<toy::Checkpoint> start;
  if (!o.init_checkpoint.empty()) {
    auto in = open_in(o.init_checkpoint);
    start = toy::load_checkpoint(in);
  }
  const toy::ToyVocab vocab = start ? start->vocab : toy::ToyVocab::standard(o.vocab_size);
  const toy::PolicyParams initial = start ? start->params : toy::init_policy(vocab, o.buckets, o.seed);

  toy::ToyDataset dataset;
  auto in = open_in(o.data);
  if (config.mode == toy::TrainMode::sft) {
    dataset.sft = io::encode_sft(io::read_sft(in), vocab, o.max_tokens);
  } else {
    dataset.pairs = io::read_toy_pairs(in, vocab, o.max_tokens);
  }

  const auto result = toy::train(initial, config, dataset);
  {
    auto f = open_out(o.checkpoint);
    toy::save_checkpoint(f, vocab, result.params);
  }
  {
    auto f = open_out(o.trace);
    toy::write_trace_csv(f, result.trace);
  }
  const auto& first = result.trace.front();
  const auto& last = result.trace.back();
  out << "mode=" << to_string(config.mode) << " steps=" << config.steps << " lr=" << config.learning_rate;
  if (config.mode == toy::TrainMode::dpo) out << " beta=" << config.beta;
  out << '\n' << "loss " << fmt(first.loss) << " -> " << fmt(last.loss) << '\n';
  if (last.margin) {
    out << "margin " << fmt(*first.margin) << " -> " << fmt(*last.margin) << '\n';
    out << "accuracy " << fmt(*first.accuracy, 3) << " -> " << fmt(*last.accuracy, 3) << '\n';
  }
  out << "wrote " << o.checkpoint << " and " << o.trace << '\n';
  return kExitOk;
}

// --- check-grad ------------------------------------------------------------

struct GradOptions {
  std::string data;
  std::size_t coords = 100;
  std::size_t pairs = 16;
  std::uint64_t seed = 11;
  double beta = dpo::kDefaultBeta;
};

std::vector<toy::TokenPair> synthetic_pairs(const toy::ToyVocab& vocab, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto word = [&] { return static_cast<toy::TokenId>(2 + rng() % (vocab.size() - 2)); };
  const auto seq = [&](std::size_t len, bool eos) {
    std::vector<toy::TokenId> s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(word());
    if (eos) s.push_back(vocab.eos());
    return s;
  };
  std::vector<toy::TokenPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"g" + std::to_string(i), seq(2 + rng() % 4, false), seq(1 + rng() % 4, true),
                   seq(1 + rng() % 4, true)});
  }
  return out;
}

int cmd_check_grad(const GradOptions& o, std::ostream& out, std::ostream&) {
  const auto vocab = toy::ToyVocab::standard(toy::kDefaultVocab);
  std::vector<toy::TokenPair> pairs;
  if (o.data.empty()) {
    pairs = synthetic_pairs(vocab, o.pairs, o.seed);
  } else {
    auto in = open_in(o.data);
    pairs = io::read_toy_pairs(in, vocab);
    if (pairs.size() > o.pairs) pairs.resize(o.pairs);
  }
  if (pairs.empty()) throw DataError("no pairs to check");
  std::vector<toy::TokenSftExample> sft;
  for (const auto& p : pairs) sft.push_back({p.id, p.prompt, p.chosen});

  // Scale the logits up so the check runs away from the uniform point.
  auto policy = toy::init_policy(vocab, toy::kDefaultBuckets, o.seed);
  const auto reference = toy::init_policy(vocab, toy::kDefaultBuckets, o.seed + 1);
  for (double& x : policy.logits) x *= 100.0;

  const gradcheck::Report reports[] = {
      gradcheck::check_scalar_loss(o.coords, o.seed),
      gradcheck::check_sft_objective(policy, sft, o.coords, o.seed),
      gradcheck::check_dpo_objective(policy, reference, pairs, o.beta, o.coords, o.seed),
  };
  bool ok = true;
  for (const auto& r : reports) {
    char line[256];
    std::snprintf(line, sizeof line, "%-20s coords=%-4zu max_rel_error=%.3e max_abs_error=%.3e %s\n",
                  r.name.c_str(), r.coordinates, r.max_rel_error, r.max_abs_error,
                  r.passed() ? "ok" : "FAIL");
    out << line;
    ok = ok && r.passed();
  }
  out << "tolerance " << gradcheck::kTolerance << " (central differences, h = " << gradcheck::kStep << ")\n";
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Summarize-then-read context filtering toolkit", "sumread"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file (TOML/INI); command-line flags take precedence")
      ->envname("SUMREAD_CONFIG");

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Parse QA data into instances.jsonl");
  c_ingest->add_option("--format", ingest.format, "Source layout")
      ->required()
      ->check(CLI::IsMember({"squad", "retrieved"}));
  c_ingest->add_option("inputs", ingest.inputs, "Input files")->required()->check(CLI::ExistingFile);
  c_ingest->add_option("-o,--out", ingest.out, "Output instances.jsonl")->capture_default_str();
  c_ingest->add_option("--split", ingest.split, "Split label for parsed records")
      ->check(CLI::IsMember({"train", "validation", "test"}))
      ->capture_default_str();
  c_ingest->add_flag("--filter", ingest.filter, "Keep only instances whose answer is in the context");
  c_ingest->add_flag("--raw-match", ingest.raw_match, "Byte-level containment instead of normalized");
  c_ingest->add_flag("--any-answer", ingest.any_answer, "Accept any reference answer, not just the first");
  c_ingest->add_flag("--strict", ingest.strict, "Fail on the first record error (exit 2)");
  c_ingest->add_option("--split-ratios", ingest.split_ratios, "train,validation fractions")
      ->delimiter(',')
      ->expected(2);
  c_ingest->add_option("--seed", ingest.seed, "Shuffle seed for --split-ratios")->capture_default_str();
  c_ingest->add_option("--errors", ingest.errors_path, "Write collected record errors as JSONL");

  PromptsOptions prompts;
  auto* c_prompts = app.add_subcommand("prompts", "Render summarizer and reader prompts");
  c_prompts->add_option("--instances", prompts.instances)->required()->check(CLI::ExistingFile);
  c_prompts->add_option("--types", prompts.types, "Comma list of 1,2,3,reader")->delimiter(',');
  c_prompts->add_option("--context-from", prompts.context_from, "outputs.jsonl with filtered contexts")
      ->check(CLI::ExistingFile);
  c_prompts->add_option("--context-kind", prompts.context_kind)->capture_default_str();
  c_prompts->add_option("--answer-index", prompts.answer_index)->capture_default_str();
  c_prompts->add_option("-o,--out", prompts.out)->capture_default_str();

  PairsOptions pairs;
  auto* c_pairs = app.add_subcommand("pairs", "Build sft.jsonl or DPO pairs.jsonl");
  c_pairs->add_option("--instances", pairs.instances)->required()->check(CLI::ExistingFile);
  c_pairs->add_option("--outputs", pairs.outputs)->required()->check(CLI::ExistingFile);
  c_pairs->add_option("--variant", pairs.variant)
      ->check(CLI::IsMember({"o1_vs_o2", "o1_vs_o3", "sft"}))
      ->capture_default_str();
  c_pairs->add_option("-o,--out", pairs.out, "Output path (default sft.jsonl / pairs.jsonl)");

  std::string validate_path;
  auto* c_validate = app.add_subcommand("validate", "Check a pairs.jsonl file");
  c_validate->add_option("--pairs", validate_path)->required()->check(CLI::ExistingFile);

  ScoreOptions score;
  auto* c_score = app.add_subcommand("score", "Score reader outputs: EM, F1, Tok Len, EPT, IRA");
  c_score->add_option("--instances", score.instances)->required()->check(CLI::ExistingFile);
  c_score->add_option("--outputs", score.outputs)->required()->check(CLI::ExistingFile);
  c_score->add_option("--prediction-kind", score.prediction_kind)->capture_default_str();
  c_score->add_option("--contexts", score.contexts, "outputs.jsonl holding reader contexts")
      ->check(CLI::ExistingFile);
  c_score->add_option("--context-kind", score.context_kind,
                      "Output kind used as the reader context (default: original context)");
  c_score->add_option("--baseline", score.baselines, "report.json of a baseline run")
      ->check(CLI::ExistingFile);
  c_score->add_option("--model", score.model, "Row label");
  c_score->add_option("--tokenizer", score.tokenizer, "whitespace or chars<N>")->capture_default_str();
  c_score->add_flag("--ira-raw", score.ira_raw, "Byte-level IRA");
  c_score->add_flag("--ira-any", score.ira_any, "IRA over any reference answer");
  c_score->add_option("--out-dir", score.out_dir)->capture_default_str();

  std::vector<std::string> report_runs;
  std::string report_md, report_csv;
  auto* c_report = app.add_subcommand("report", "Combine report.json files into one table");
  c_report->add_option("runs", report_runs)->required()->check(CLI::ExistingFile);
  c_report->add_option("--md", report_md);
  c_report->add_option("--csv", report_csv);

  DpoEvalOptions dpo_eval;
  auto* c_dpo = app.add_subcommand("dpo-eval", "DPO loss, margins and accuracy from logprobs.jsonl");
  c_dpo->add_option("--logprobs", dpo_eval.logprobs)->required()->check(CLI::ExistingFile);
  c_dpo->add_option("--beta", dpo_eval.beta, "Overrides the file's beta (default 0.1)")
      ->check(CLI::PositiveNumber);
  c_dpo->add_flag("--length-normalize", dpo_eval.length_normalize, "Per-token mean log-probs (diagnostic)");
  c_dpo->add_option("-o,--out", dpo_eval.out)->capture_default_str();

  TrainOptions train;
  auto* c_train = app.add_subcommand("train-toy", "Train the tabular toy policy with SFT or DPO");
  c_train->add_option("--mode", train.mode)->check(CLI::IsMember({"sft", "dpo"}))->capture_default_str();
  c_train->add_option("--data", train.data, "sft.jsonl (sft) or preference pairs (dpo)")
      ->required()
      ->check(CLI::ExistingFile);
  c_train->add_option("--steps", train.steps)->check(CLI::PositiveNumber);
  c_train->add_option("--lr", train.lr)->check(CLI::PositiveNumber);
  c_train->add_option("--beta", train.beta)->check(CLI::PositiveNumber);
  c_train->add_option("--seed", train.seed)->capture_default_str();
  c_train->add_option("--buckets", train.buckets)->check(CLI::PositiveNumber)->capture_default_str();
  c_train->add_option("--vocab-size", train.vocab_size)->check(CLI::Range(3, 64))->capture_default_str();
  c_train->add_option("--batch-size", train.batch_size, "0 = full batch")->capture_default_str();
  c_train->add_option("--max-tokens", train.max_tokens)->capture_default_str();
  c_train->add_option("--init-checkpoint", train.init_checkpoint)->check(CLI::ExistingFile);
  c_train->add_option("--checkpoint", train.checkpoint)->capture_default_str();
  c_train->add_option("--trace", train.trace)->capture_default_str();

  GradOptions grad;
  auto* c_grad = app.add_subcommand("check-grad", "Finite-difference check of every analytic gradient");
  c_grad->add_option("--data", grad.data, "Toy preference pairs (default: synthetic)")->check(CLI::ExistingFile);
  c_grad->add_option("--coords", grad.coords)->check(CLI::PositiveNumber)->capture_default_str();
  c_grad->add_option("--pairs", grad.pairs)->check(CLI::PositiveNumber)->capture_default_str();
  c_grad->add_option("--seed", grad.seed)->capture_default_str();
  c_grad->add_option("--beta", grad.beta)->check(CLI::PositiveNumber)->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "sumread 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c_ingest->parsed()) return cmd_ingest(ingest, out, err);
    if (c_prompts->parsed()) return cmd_prompts(prompts, out, err);
    if (c_pairs->parsed()) return cmd_pairs(pairs, out, err);
    if (c_validate->parsed()) return cmd_validate(validate_path, out, err);
    if (c_score->parsed()) return cmd_score(score, out, err);
    if (c_report->parsed()) return cmd_report(report_runs, report_md, report_csv, out);
    if (c_dpo->parsed()) return cmd_dpo_eval(dpo_eval, out, err);
    if (c_train->parsed()) return cmd_train_toy(train, out, err);
    if (c_grad->parsed()) return cmd_check_grad(grad, out, err);
  } catch (const RecordErrorException& e) {
    err << "record error: " << e.what() << '\n';
    return kExitRecordErrors;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace sumread::cli
