#include "sumread/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "random.hpp"
#include "sumread/dpo.hpp"
#include "sumread/error.hpp"

namespace sumread::gradcheck {

double relative_error(double analytic, double numeric) {
  const double diff = std::abs(analytic - numeric);
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  return scale < 1e-12 ? diff : diff / scale;
}

double central_difference(const Objective& f, std::vector<double>& x, std::size_t i, double h) {
  const double saved = x[i];
  x[i] = saved + h;
  const double plus = f(x);
  x[i] = saved - h;
  const double minus = f(x);
  x[i] = saved;
  return (plus - minus) / (2.0 * h);
}

Report check(std::string name, const Objective& f, std::vector<double> x,
             std::span<const double> analytic, std::span<const std::size_t> coords, double h) {
  if (analytic.size() != x.size()) throw ArgumentError("gradient and parameter sizes differ");
  Report r;
  r.name = std::move(name);
  for (std::size_t i : coords) {
    const double numeric = central_difference(f, x, i, h);
    const double rel = relative_error(analytic[i], numeric);
    r.max_abs_error = std::max(r.max_abs_error, std::abs(analytic[i] - numeric));
    if (rel >= r.max_rel_error) {
      r.max_rel_error = rel;
      r.worst_index = i;
    }
    ++r.coordinates;
  }
  return r;
}

std::vector<std::size_t> sample_active(std::span<const double> analytic, std::size_t count,
                                       std::uint64_t seed) {
  double largest = 0.0;
  for (double g : analytic) largest = std::max(largest, std::abs(g));
  // Entries far below the largest are cancellation residue (e.g. a shared
  // row pushed up by the chosen response and down by the rejected one).
  const double floor = 1e-6 * largest;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    if (std::abs(analytic[i]) > floor) active.push_back(i);
  }
  detail::SeededRng rng(seed);
  const std::size_t take = std::min(count, active.size());
  // Partial Fisher-Yates: the first `take` slots end up a uniform sample.
  for (std::size_t k = 0; k < take; ++k) {
    std::swap(active[k], active[k + rng.below(active.size() - k)]);
  }
  active.resize(take);
  std::sort(active.begin(), active.end());
  return active;
}

Report check_scalar_loss(std::size_t points, std::uint64_t seed, double h) {
  detail::SeededRng rng(seed);
  Report r;
  r.name = "dpo_loss(margin)";
  for (std::size_t k = 0; k < points; ++k) {
    const double m = rng.uniform(-20.0, 20.0);
    const double numeric = (dpo::dpo_loss(m + h) - dpo::dpo_loss(m - h)) / (2.0 * h);
    // d loss / d margin equals d loss / d r_chosen.
    const double analytic = dpo::dpo_loss_grad(m).d_chosen;
    const double rel = relative_error(analytic, numeric);
    if (rel >= r.max_rel_error) {
      r.max_rel_error = rel;
      r.worst_index = k;
    }
    r.max_abs_error = std::max(r.max_abs_error, std::abs(analytic - numeric));
    ++r.coordinates;
  }
  return r;
}

Report check_sft_objective(const toy::PolicyParams& params, std::span<const toy::TokenSftExample> batch,
                           std::size_t coords, std::uint64_t seed, double h) {
  const auto analytic = toy::sft_gradient(params, batch);
  toy::PolicyParams scratch = params;
  const Objective f = [&](std::span<const double> x) {
    std::copy(x.begin(), x.end(), scratch.logits.begin());
    return toy::sft_objective(scratch, batch);
  };
  const auto picked = sample_active(analytic, coords, seed);
  return check("toy SFT objective", f, params.logits, analytic, picked, h);
}

Report check_dpo_objective(const toy::PolicyParams& params, const toy::PolicyParams& reference,
                           std::span<const toy::TokenPair> batch, double beta, std::size_t coords,
                           std::uint64_t seed, double h) {
  const auto analytic = toy::dpo_gradient(params, reference, batch, beta);
  toy::PolicyParams scratch = params;
  const Objective f = [&](std::span<const double> x) {
    std::copy(x.begin(), x.end(), scratch.logits.begin());
    return toy::dpo_objective(scratch, reference, batch, beta);
  };
  const auto picked = sample_active(analytic, coords, seed);
  return check("toy DPO objective", f, params.logits, analytic, picked, h);
}

}  // namespace sumread::gradcheck
