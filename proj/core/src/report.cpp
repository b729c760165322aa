#include "sumread/report.hpp"

#include <cstdio>

namespace sumread {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string describe_retention(const RetentionPoint& p) {
  std::string out = "vs ";
  out += p.baseline.empty() ? std::string("baseline") : p.baseline;
  out += ": length " + fixed(100.0 * p.length_fraction, 1) + "%, EM retained " +
         fixed(100.0 * p.em_retention, 1) + "%";
  return out;
}

std::string render_markdown(std::span<const AggregateReport> reports) {
  std::string out = "| Model | EM | F1 | Tok Len | EPT | IRA |\n";
  out += "|---|---:|---:|---:|---:|---:|\n";
  for (const auto& r : reports) {
    out += "| " + (r.model.empty() ? std::string("-") : r.model) + " | " + fixed(r.em_pct, 2) +
           " | " + fixed(r.f1_pct, 2) + " | " + fixed(r.mean_token_len, 2) + " | " +
           fixed(r.ept_ratio, 2) + " | " + fixed(r.ira_pct, 2) + " |\n";
  }
  out += "\nEPT = EM / mean Tok Len (ratio of means).\n";
  bool any_retention = false;
  for (const auto& r : reports) {
    out += "\n- " + (r.model.empty() ? std::string("-") : r.model) + ": n = " + std::to_string(r.n) +
           ", mean per-instance EPT = " + fixed(r.ept_mean, 4);
    any_retention = any_retention || !r.retention.empty();
  }
  out += "\n";
  if (any_retention) {
    out += "\nRetention:\n";
    for (const auto& r : reports) {
      for (const auto& p : r.retention) out += "\n- " + r.model + " " + describe_retention(p);
    }
    out += "\n";
  }
  return out;
}

std::string render_csv(std::span<const AggregateReport> reports) {
  std::string out = "Model,EM,F1,Tok Len,EPT,IRA\n";
  for (const auto& r : reports) {
    out += csv_field(r.model) + "," + full(r.em_pct) + "," + full(r.f1_pct) + "," +
           full(r.mean_token_len) + "," + full(r.ept_ratio) + "," + full(r.ira_pct) + "\n";
  }
  return out;
}

}  // namespace sumread
