#include "ghcert/bishop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ghcert/nets.hpp"
#include "ghcert/rng.hpp"

namespace ghcert {

EmpiricalMeasure EmpiricalMeasure::uniform(int n, double total_mass) {
  if (n <= 0) throw invalid_argument_error("measure needs at least one point");
  if (!(total_mass > 0.0)) throw invalid_argument_error("total mass must be positive");
  EmpiricalMeasure m;
  m.weights.assign(static_cast<std::size_t>(n), total_mass / n);
  m.total = total_mass;
  return m;
}

EmpiricalMeasure EmpiricalMeasure::weighted(std::vector<double> weights) {
  EmpiricalMeasure m;
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw invalid_argument_error("weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw invalid_argument_error("total mass must be positive");
  m.weights = std::move(weights);
  m.total = total;
  return m;
}

std::vector<std::vector<double>> ball_mass_profile(const DistanceOracle& space,
                                                   const EmpiricalMeasure& measure,
                                                   std::span<const int> centers,
                                                   std::span<const double> eta_grid) {
  if (measure.weights.size() != static_cast<std::size_t>(space.size()))
    throw invalid_argument_error("measure does not match the space");
  for (std::size_t i = 0; i + 1 < eta_grid.size(); ++i)
    if (!(eta_grid[i] < eta_grid[i + 1]))
      throw invalid_argument_error("eta grid must be strictly increasing");
  for (double eta : eta_grid)
    if (!(eta > 0.0)) throw invalid_argument_error("eta grid must be positive");

  std::vector<std::vector<double>> table;
  table.reserve(centers.size());
  for (int c : centers) {
    if (c < 0 || c >= space.size()) throw invalid_argument_error("profile center out of range");
    std::vector<double> row(eta_grid.size(), 0.0);
    for (int j = 0; j < space.size(); ++j) {
      const double d = space.distance(c, j);
      // Distances partition the grid: add the weight to every eta > d.
      for (std::size_t e = 0; e < eta_grid.size(); ++e)
        if (d < eta_grid[e]) {
          for (std::size_t e2 = e; e2 < eta_grid.size(); ++e2)
            row[e2] += measure.weights[static_cast<std::size_t>(j)];
          break;
        }
    }
    table.push_back(std::move(row));
  }
  return table;
}

BishopFit bishop_fit(const DistanceOracle& space, const EmpiricalMeasure& measure,
                     double eta_min, double eta_max, int steps, int centers_requested,
                     std::uint64_t seed) {
  const int n = space.size();
  if (measure.weights.size() != static_cast<std::size_t>(n))
    throw invalid_argument_error("measure does not match the space");
  if (steps < 2 || !(eta_min > 0.0) || !(eta_min < eta_max))
    throw Error("degenerate-range", "bishop fit needs at least 2 radii with 0 < eta_min < eta_max");
  const double floor = 2.0 * space.fill_radius();
  const double diam = space.diameter();
  if (eta_min < floor || eta_max > diam / 2.0) {
    std::ostringstream msg;
    msg << "eta range [" << eta_min << ", " << eta_max << "] outside validity window ["
        << floor << ", " << diam / 2.0 << "]";
    throw Error("range-outside-window", msg.str());
  }

  BishopFit fit;
  fit.eta_grid.resize(static_cast<std::size_t>(steps));
  const double log_lo = std::log(eta_min);
  const double log_hi = std::log(eta_max);
  for (int s = 0; s < steps; ++s)
    fit.eta_grid[static_cast<std::size_t>(s)] =
        std::exp(log_lo + (log_hi - log_lo) * s / (steps - 1));

  // Pool centers to suppress center-specific curvature effects.
  const int want = std::min(n, std::clamp(centers_requested, 20, 200));
  SplitMix64 rng = substream(seed, 0x6269736870ULL);
  fit.centers = sample_without_replacement(n, want, rng);
  std::sort(fit.centers.begin(), fit.centers.end());

  fit.masses = ball_mass_profile(space, measure, fit.centers, fit.eta_grid);

  // Least-squares slope (with intercept) of log mass against log eta; the
  // intercept keeps the slope scale-equivariant and is absorbed into beta.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  double first_mass = -1.0;
  bool distinct = false;
  for (std::size_t c = 0; c < fit.masses.size(); ++c)
    for (std::size_t e = 0; e < fit.eta_grid.size(); ++e) {
      const double mass = fit.masses[c][e];
      if (!(mass > 0.0)) continue;
      if (first_mass < 0.0)
        first_mass = mass;
      else if (mass != first_mass)
        distinct = true;
      const double lx = std::log(fit.eta_grid[e]);
      const double ly = std::log(mass);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++count;
    }
  if (count < 2 || !distinct)
    throw Error("degenerate-profile",
                "fewer than 2 distinct ball masses; dimension-0 suspicion");

  const double denom = count * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0))
    throw Error("degenerate-range", "eta grid collapsed in log space");
  fit.p_hat = (count * sxy - sx * sy) / denom;

  double max_residual = 0.0;
  for (std::size_t c = 0; c < fit.masses.size(); ++c)
    for (std::size_t e = 0; e < fit.eta_grid.size(); ++e) {
      const double mass = fit.masses[c][e];
      if (!(mass > 0.0)) continue;
      const double res = std::abs(std::log(mass) - fit.p_hat * std::log(fit.eta_grid[e]));
      max_residual = std::max(max_residual, res);
    }
  fit.residual = max_residual;
  // Tiny relative bump so the stored constant replays under floating
  // arithmetic; beta >= 1 since the residual is nonnegative.
  fit.beta_hat = std::exp(max_residual) * (1.0 + 1e-12);
  fit.eta0 = eta_max;
  fit.theta_derived = fit.eta0 / 2.0;
  fit.c_derived = fit.beta_hat * std::pow(2.0, fit.p_hat);
  return fit;
}

bool replay_bishop_fit(const BishopFit& fit) {
  for (std::size_t c = 0; c < fit.masses.size(); ++c)
    for (std::size_t e = 0; e < fit.eta_grid.size(); ++e) {
      const double mass = fit.masses[c][e];
      if (!(mass > 0.0)) return false;
      const double eta_p = std::pow(fit.eta_grid[e], fit.p_hat);
      if (mass > fit.beta_hat * eta_p) return false;
      if (mass < eta_p / fit.beta_hat) return false;
    }
  return true;
}

namespace {

// Certified Cap(r) bounds: exact when the instance fits the exact solver,
// otherwise greedy packing below and greedy cover above (Cap <= Cov).
struct CapBracket {
  long lower = 0;
  long upper = 0;
  bool exact = false;
};

CapBracket cap_bracket(const DistanceOracle& space, double r) {
  CapBracket b;
  if (space.size() <= kExactPackingLimit) {
    const long cap = packing_number(space, r, BoundMode::Exact).count;
    b.lower = b.upper = cap;
    b.exact = true;
  } else {
    b.lower = packing_number(space, r, BoundMode::Greedy).count;
    b.upper = covering_number(space, r, BoundMode::Greedy).count;
  }
  return b;
}

}  // namespace

std::vector<CapBoundsRow> cap_bounds_check(const DistanceOracle& space, const BishopFit& fit,
                                           const EmpiricalMeasure& measure,
                                           std::span<const double> r_grid) {
  const double floor = 2.0 * space.fill_radius();
  for (double r : r_grid)
    if (!(r > floor) || !(r < fit.theta_derived)) {
      std::ostringstream msg;
      msg << "radius " << r << " outside validity window (" << floor << ", "
          << fit.theta_derived << ")";
      throw Error("range-outside-window", msg.str());
    }

  const double c = fit.c_derived;
  std::vector<CapBoundsRow> rows;
  for (double r : r_grid) {
    CapBoundsRow row;
    row.r = r;
    const CapBracket at_r = cap_bracket(space, r);
    row.cap_lower = at_r.lower;
    row.cap_upper = at_r.upper;
    row.cap_exact = at_r.exact;

    const double rp = std::pow(r, fit.p_hat);
    row.lemma_lhs = measure.total / (c * rp);
    row.lemma_rhs = c * measure.total / rp;
    row.lemma_lower_pass = static_cast<double>(at_r.lower) >= row.lemma_lhs;
    row.lemma_upper_pass = static_cast<double>(at_r.upper) <= row.lemma_rhs;

    for (double alpha : {0.5, 2.0}) {
      const double ar = alpha * r;
      if (!(ar > floor) || !(ar < fit.theta_derived)) continue;
      const CapBracket at_ar = cap_bracket(space, ar);
      const double factor = std::pow(alpha, -fit.p_hat);
      const double lo = factor / (c * c) * static_cast<double>(at_r.upper);
      const double hi = factor * (c * c) * static_cast<double>(at_r.lower);
      const bool pass =
          static_cast<double>(at_ar.lower) >= lo && static_cast<double>(at_ar.upper) <= hi;
      if (alpha == 0.5) {
        row.scaling_half_evaluated = true;
        row.scaling_half_pass = pass;
      } else {
        row.scaling_two_evaluated = true;
        row.scaling_two_pass = pass;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ghcert
