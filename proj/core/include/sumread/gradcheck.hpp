#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sumread/toy_policy.hpp"

namespace sumread::gradcheck {

inline constexpr double kStep = 1e-5;
inline constexpr double kTolerance = 1e-4;

/// |a - n| / max(|a|, |n|); plain |a - n| when both are below 1e-12.
double relative_error(double analytic, double numeric);

using Objective = std::function<double(std::span<const double>)>;

/// (f(x + h e_i) - f(x - h e_i)) / 2h. `x` is restored before returning.
double central_difference(const Objective& f, std::vector<double>& x, std::size_t i, double h = kStep);

struct Report {
  std::string name;
  std::size_t coordinates = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t worst_index = 0;

  bool passed(double tolerance = kTolerance) const { return max_rel_error < tolerance; }
};

Report check(std::string name, const Objective& f, std::vector<double> x,
             std::span<const double> analytic, std::span<const std::size_t> coords, double h = kStep);

/// `count` distinct coordinates drawn with the seed from the active ones,
/// i.e. |g_i| > 1e-6 * max|g| (all of them if fewer are active).
std::vector<std::size_t> sample_active(std::span<const double> analytic, std::size_t count,
                                       std::uint64_t seed);

/// The d loss / d margin identity at `points` random margins in [-20, 20].
Report check_scalar_loss(std::size_t points, std::uint64_t seed, double h = kStep);

/// Full toy objectives at a generic point (policy and reference drawn from
/// different seeds, so DPO margins are nonzero).
Report check_sft_objective(const toy::PolicyParams& params, std::span<const toy::TokenSftExample> batch,
                           std::size_t coords, std::uint64_t seed, double h = kStep);
Report check_dpo_objective(const toy::PolicyParams& params, const toy::PolicyParams& reference,
                           std::span<const toy::TokenPair> batch, double beta, std::size_t coords,
                           std::uint64_t seed, double h = kStep);

}  // namespace sumread::gradcheck
