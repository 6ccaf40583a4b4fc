#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ghcert/metric_space.hpp"

namespace ghcert {

// Point-supported measure; the samplers' proxy for the volume form.
struct EmpiricalMeasure {
  std::vector<double> weights;
  double total = 0.0;

  static EmpiricalMeasure uniform(int n, double total_mass = 1.0);
  static EmpiricalMeasure weighted(std::vector<double> weights);
};

// Ball masses mu(B(center, eta)) for each center and eta in the grid.
// Result is indexed [center][eta].
std::vector<std::vector<double>> ball_mass_profile(const DistanceOracle& space,
                                                   const EmpiricalMeasure& measure,
                                                   std::span<const int> centers,
                                                   std::span<const double> eta_grid);

// Power-law fit of ball masses: mass within [eta^p / beta, beta * eta^p] for
// all sampled (center, eta), with the smallest beta making that hold.
struct BishopFit {
  double p_hat = 0.0;
  double beta_hat = 1.0;
  double eta0 = 0.0;           // validity cutoff (top of the fitted window)
  double c_derived = 1.0;      // beta * 2^p
  double theta_derived = 0.0;  // eta0 / 2
  double residual = 0.0;       // max |log mass - p*log eta|

  // The sampled profile, kept so the fit replays exactly.
  std::vector<int> centers;
  std::vector<double> eta_grid;
  std::vector<std::vector<double>> masses;  // [center][eta]
};

// Pooled log-log regression over seeded sample centers (clamped to
// [20, 200] when the space allows). Radii are log-spaced over
// [eta_min, eta_max], which must sit inside [2*fill radius, diameter/2].
BishopFit bishop_fit(const DistanceOracle& space, const EmpiricalMeasure& measure,
                     double eta_min, double eta_max, int steps, int centers_requested,
                     std::uint64_t seed);

// Re-checks the sandwich at every stored (center, eta) pair.
bool replay_bishop_fit(const BishopFit& fit);

struct CapBoundsRow {
  double r = 0.0;
  long cap_lower = 0;  // certified lower bound on Cap(r)
  long cap_upper = 0;  // certified upper bound on Cap(r) (via a cover)
  bool cap_exact = false;
  double lemma_lhs = 0.0;  // mu(X) / (C r^p)
  double lemma_rhs = 0.0;  // C mu(X) / r^p
  bool lemma_lower_pass = false;
  bool lemma_upper_pass = false;
  // Scaling sandwich Cap(alpha r) within alpha^-p C^-/+2 of Cap(r).
  bool scaling_half_evaluated = false;
  bool scaling_half_pass = false;
  bool scaling_two_evaluated = false;
  bool scaling_two_pass = false;
};

// Checks the packing-number estimates implied by the fit at each grid radius
// with C = c_derived, using exact Cap when the space is small enough and
// certified one-sided bounds otherwise. The grid must lie strictly inside
// (resolution floor, theta_derived).
std::vector<CapBoundsRow> cap_bounds_check(const DistanceOracle& space, const BishopFit& fit,
                                           const EmpiricalMeasure& measure,
                                           std::span<const double> r_grid);

}  // namespace ghcert
