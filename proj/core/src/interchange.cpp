#include "sumread/interchange.hpp"

#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>

#include "json.hpp"
#include "sumread/error.hpp"

namespace sumread::io {
namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

template <class Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what(), line_no, e.byte);
    }
    if (!obj.is_object()) throw DataError("line " + std::to_string(line_no) + ": not a JSON object", line_no);
    try {
      fn(obj, line_no);
    } catch (const DataError& e) {
      if (e.line() != 0) throw;
      throw DataError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    } catch (const ArgumentError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
}

std::string str(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

double num(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw DataError(std::string("field '") + key + "' must be a number");
  }
  return it->get<double>();
}

std::vector<double> num_list(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) throw DataError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) throw DataError(std::string("field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void emit(std::ostream& out, const ojson& j) { out << j.dump() << '\n'; }

}  // namespace

// --- instances -------------------------------------------------------------

void write_instances(std::ostream& out, std::span<const QaInstance> instances) {
  for (const auto& inst : instances) {
    ojson j;
    j["id"] = inst.id;
    j["question"] = inst.question;
    j["answers"] = inst.answers;
    j["context"] = inst.context;
    j["source"] = to_string(inst.source);
    j["split"] = to_string(inst.split);
    emit(out, j);
  }
}

std::vector<QaInstance> read_instances(std::istream& in) {
  std::vector<QaInstance> out;
  std::set<std::pair<Split, std::string>> seen;
  for_each_record(in, [&](const json& j, std::size_t) {
    QaInstance inst;
    inst.id = str(j, "id");
    inst.question = str(j, "question");
    const auto& answers = j.at("answers");
    if (!answers.is_array()) throw DataError("field 'answers' must be an array");
    for (const auto& a : answers) {
      if (!a.is_string()) throw DataError("answers must be strings");
      inst.answers.push_back(a.get<std::string>());
    }
    inst.context = str(j, "context");
    inst.source = parse_source(str(j, "source"));
    inst.split = parse_split(str(j, "split"));
    if (auto problem = check_instance(inst); !problem.empty()) throw DataError(problem);
    if (!seen.emplace(inst.split, inst.id).second) throw DataError("duplicate id '" + inst.id + "'");
    out.push_back(std::move(inst));
  });
  return out;
}

// --- prompts ---------------------------------------------------------------

void write_prompts(std::ostream& out, std::span<const PromptRecord> prompts) {
  for (const auto& p : prompts) {
    ojson j;
    j["id"] = p.id;
    j["kind"] = to_string(p.kind);
    j["prompt"] = p.prompt;
    emit(out, j);
  }
}

std::vector<PromptRecord> read_prompts(std::istream& in) {
  std::vector<PromptRecord> out;
  for_each_record(in, [&](const json& j, std::size_t) {
    out.push_back({str(j, "id"), parse_prompt_kind(str(j, "kind")), str(j, "prompt")});
  });
  return out;
}

// --- outputs ---------------------------------------------------------------

void write_outputs(std::ostream& out, std::span<const OutputRecord> outputs) {
  for (const auto& o : outputs) {
    ojson j;
    j["id"] = o.id;
    j["kind"] = o.kind;
    j["text"] = o.text;
    emit(out, j);
  }
}

std::vector<OutputRecord> read_outputs(std::istream& in) {
  std::vector<OutputRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  for_each_record(in, [&](const json& j, std::size_t) {
    OutputRecord r{str(j, "id"), str(j, "kind"), str(j, "text")};
    if (r.kind.empty()) throw DataError("empty kind");
    if (!seen.emplace(r.id, r.kind).second) {
      throw DataError("repeated output for id '" + r.id + "' kind '" + r.kind + "'");
    }
    out.push_back(std::move(r));
  });
  return out;
}

OutputTable summary_outputs(std::span<const OutputRecord> records) {
  OutputTable table;
  for (const auto& r : records) {
    if (r.kind == "type1") {
      table[r.id].o1 = r.text;
    } else if (r.kind == "type2") {
      table[r.id].o2 = r.text;
    } else if (r.kind == "type3") {
      table[r.id].o3 = r.text;
    }
  }
  return table;
}

std::map<std::string, std::string, std::less<>> outputs_of_kind(std::span<const OutputRecord> records,
                                                               std::string_view kind) {
  std::map<std::string, std::string, std::less<>> out;
  for (const auto& r : records) {
    if (r.kind == kind) out.emplace(r.id, r.text);
  }
  return out;
}

// --- sft / pairs -----------------------------------------------------------

void write_sft(std::ostream& out, std::span<const SftExample> examples) {
  for (const auto& e : examples) {
    ojson j;
    j["id"] = e.id;
    j["input"] = e.input;
    j["target"] = e.target;
    emit(out, j);
  }
}

std::vector<SftExample> read_sft(std::istream& in) {
  std::vector<SftExample> out;
  for_each_record(in, [&](const json& j, std::size_t) {
    SftExample e{str(j, "id"), str(j, "input"), str(j, "target")};
    if (e.target.empty()) throw DataError("empty target");
    out.push_back(std::move(e));
  });
  return out;
}

void write_pairs(std::ostream& out, std::span<const PreferencePair> pairs) {
  for (const auto& p : pairs) {
    ojson j;
    j["id"] = p.id;
    j["x"] = p.x;
    j["chosen"] = p.chosen;
    j["rejected"] = p.rejected;
    j["variant"] = to_string(p.variant);
    emit(out, j);
  }
}

PairsFile read_pairs(std::istream& in) {
  PairsFile out;
  for_each_record(in, [&](const json& j, std::size_t line) {
    out.pairs.push_back({str(j, "id"), str(j, "x"), str(j, "chosen"), str(j, "rejected"),
                         parse_variant(str(j, "variant"))});
    out.lines.push_back(line);
  });
  return out;
}

// --- scores / reports ------------------------------------------------------

void write_scores(std::ostream& out, std::span<const ScoreRow> rows) {
  for (const auto& r : rows) {
    ojson j;
    j["id"] = r.id;
    j["em"] = r.em;
    j["f1"] = r.f1;
    j["token_len"] = r.token_len;
    j["ept"] = r.ept;
    j["ira"] = r.ira;
    emit(out, j);
  }
}

std::vector<ScoreRow> read_scores(std::istream& in) {
  std::vector<ScoreRow> out;
  for_each_record(in, [&](const json& j, std::size_t) {
    ScoreRow r;
    r.id = str(j, "id");
    r.em = j.at("em").get<int>();
    r.f1 = num(j, "f1");
    r.token_len = j.at("token_len").get<std::size_t>();
    r.ept = num(j, "ept");
    r.ira = j.at("ira").get<int>();
    if ((r.em != 0 && r.em != 1) || (r.ira != 0 && r.ira != 1)) throw DataError("em and ira must be 0 or 1");
    if (r.token_len == 0) throw DataError("token_len must be positive");
    out.push_back(std::move(r));
  });
  return out;
}

void write_report_json(std::ostream& out, const AggregateReport& r) {
  ojson j;
  j["model"] = r.model;
  j["n"] = r.n;
  j["em_pct"] = r.em_pct;
  j["f1_pct"] = r.f1_pct;
  j["mean_token_len"] = r.mean_token_len;
  j["ept_ratio"] = r.ept_ratio;
  j["ept_mean"] = r.ept_mean;
  j["ira_pct"] = r.ira_pct;
  j["retention"] = ojson::array();
  for (const auto& p : r.retention) {
    ojson q;
    q["baseline"] = p.baseline;
    q["length_fraction"] = p.length_fraction;
    q["em_retention"] = p.em_retention;
    j["retention"].push_back(q);
  }
  out << j.dump(2) << '\n';
}

AggregateReport read_report_json(std::istream& in) {
  json j;
  try {
    j = json::parse(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed report: ") + e.what(), 0, e.byte);
  }
  try {
    AggregateReport r;
    r.model = j.value("model", "");
    r.n = j.at("n").get<std::size_t>();
    r.em_pct = num(j, "em_pct");
    r.f1_pct = num(j, "f1_pct");
    r.mean_token_len = num(j, "mean_token_len");
    r.ept_ratio = num(j, "ept_ratio");
    r.ept_mean = num(j, "ept_mean");
    r.ira_pct = num(j, "ira_pct");
    if (j.contains("retention")) {
      for (const auto& q : j.at("retention")) {
        r.retention.push_back({q.value("baseline", ""), num(q, "length_fraction"), num(q, "em_retention")});
      }
    }
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

std::string stats_json(const CorpusStats& s) {
  ojson j;
  j["split"] = s.split ? ojson(std::string(to_string(*s.split))) : ojson(nullptr);
  j["total"] = s.total;
  j["kept"] = s.kept;
  j["dropped"] = s.dropped;
  j["kept_fraction"] = s.kept_fraction;
  return j.dump();
}

std::string stats_json(const PairBuildStats& s) {
  ojson j;
  j["candidates"] = s.candidates;
  j["built"] = s.built;
  j["dropped_identical"] = s.dropped_identical;
  j["dropped_missing_output"] = s.dropped_missing_output;
  return j.dump();
}

// --- log-probabilities -----------------------------------------------------

LogprobsFile read_logprobs(std::istream& in) {
  struct Slot {
    std::optional<dpo::SequenceLogprobs> chosen;
    std::optional<dpo::SequenceLogprobs> rejected;
    std::size_t line = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Slot> slots;
  LogprobsFile out;

  for_each_record(in, [&](const json& j, std::size_t line) {
    dpo::SequenceLogprobs seq;
    seq.id = str(j, "id");
    seq.role = dpo::parse_role(str(j, "role"));
    seq.policy_logprobs = num_list(j, "policy_logprobs");
    seq.reference_logprobs = num_list(j, "reference_logprobs");
    dpo::validate(seq);
    if (j.contains("beta") && !j.at("beta").is_null()) {
      const double beta = num(j, "beta");
      if (!(beta > 0.0)) throw DataError("beta must be positive");
      if (out.beta && *out.beta != beta) throw DataError("conflicting beta values in one file");
      out.beta = beta;
    }
    auto [it, fresh] = slots.try_emplace(seq.id);
    if (fresh) {
      order.push_back(seq.id);
      it->second.line = line;
    }
    auto& target = seq.role == dpo::Role::chosen ? it->second.chosen : it->second.rejected;
    if (target) throw DataError("repeated role '" + std::string(dpo::to_string(seq.role)) + "' for id '" + seq.id + "'");
    target = std::move(seq);
  });

  for (const auto& id : order) {
    auto& slot = slots.at(id);
    if (!slot.chosen || !slot.rejected) {
      throw DataError("line " + std::to_string(slot.line) + ": id '" + id + "' lacks its " +
                          (slot.chosen ? "rejected" : "chosen") + " record",
                      slot.line);
    }
    out.pairs.push_back({std::move(*slot.chosen), std::move(*slot.rejected)});
  }
  return out;
}

void write_logprobs(std::ostream& out, std::span<const dpo::LogprobPair> pairs, std::optional<double> beta) {
  for (const auto& p : pairs) {
    for (const auto* seq : {&p.chosen, &p.rejected}) {
      ojson j;
      j["id"] = seq->id;
      j["role"] = dpo::to_string(seq->role);
      if (beta) j["beta"] = *beta;
      j["policy_logprobs"] = seq->policy_logprobs;
      j["reference_logprobs"] = seq->reference_logprobs;
      emit(out, j);
    }
  }
}

void write_loss_report(std::ostream& out, const dpo::LossReport& r, double beta, dpo::LengthNorm norm) {
  ojson j;
  j["n_pairs"] = r.n_pairs;
  j["mean_loss"] = r.mean_loss;
  j["mean_margin"] = r.mean_margin;
  j["preference_accuracy"] = r.preference_accuracy;
  j["beta"] = beta;
  j["log_base"] = "e";
  j["length_normalization"] = norm == dpo::LengthNorm::none ? "none" : "per_token";
  out << j.dump(2) << '\n';
}

// --- toy data --------------------------------------------------------------

std::vector<toy::TokenPair> read_toy_pairs(std::istream& in, const toy::ToyVocab& vocab,
                                           std::size_t max_response_tokens) {
  const auto tokens = [&](const json& j, const char* key, bool response) {
    const auto it = j.find(key);
    if (it == j.end()) throw DataError(std::string("missing field '") + key + "'");
    std::vector<toy::TokenId> ids;
    if (it->is_array()) {
      ids = vocab.encode_symbols(it->get<std::vector<std::string>>());
      if (response && (ids.empty() || ids.back() != vocab.eos())) ids.push_back(vocab.eos());
    } else if (it->is_string()) {
      ids = vocab.encode_text(it->get<std::string>(), response ? max_response_tokens : 0, response);
    } else {
      throw DataError(std::string("field '") + key + "' must be a symbol array or a string");
    }
    return ids;
  };

  std::vector<toy::TokenPair> out;
  for_each_record(in, [&](const json& j, std::size_t) {
    toy::TokenPair p;
    p.id = j.contains("id") ? str(j, "id") : std::to_string(out.size());
    p.prompt = tokens(j, j.contains("prompt") ? "prompt" : "x", false);
    p.chosen = tokens(j, "chosen", true);
    p.rejected = tokens(j, "rejected", true);
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<toy::TokenSftExample> encode_sft(std::span<const SftExample> examples, const toy::ToyVocab& vocab,
                                             std::size_t max_target_tokens) {
  std::vector<toy::TokenSftExample> out;
  out.reserve(examples.size());
  for (const auto& e : examples) {
    out.push_back({e.id, vocab.encode_text(e.input), vocab.encode_text(e.target, max_target_tokens, true)});
  }
  return out;
}

}  // namespace sumread::io
