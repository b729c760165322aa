#pragma once

#include <span>
#include <string>

#include "sumread/metrics.hpp"

namespace sumread {

/// Column order of every report table.
inline constexpr const char* kReportColumns[] = {"Model", "EM", "F1", "Tok Len", "EPT", "IRA"};

/// Markdown table, one row per report, followed by the mean-of-ratios EPT
/// and any retention points. Values are printed with two decimals.
std::string render_markdown(std::span<const AggregateReport> reports);

/// CSV with the header `Model,EM,F1,Tok Len,EPT,IRA` and full precision.
std::string render_csv(std::span<const AggregateReport> reports);

/// e.g. "vs Origin: length 20.4%, EM retained 92.7%".
std::string describe_retention(const RetentionPoint& point);

}  // namespace sumread
