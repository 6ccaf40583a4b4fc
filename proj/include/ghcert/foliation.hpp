#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghcert/metric_space.hpp"

namespace ghcert {

enum class FoliationModel { TorusFibration, Hopf, Custom };

std::string model_name(FoliationModel model);
FoliationModel model_from_name(const std::string& name);

// A sampled compact Hausdorff foliation: point cloud with leaf assignments,
// geodesic metric (analytic for the built-in models, dense for custom
// clouds), leaf dimension p and manifold dimension n.
class FoliatedSample final : public DistanceOracle {
public:
  FoliationModel model = FoliationModel::Custom;
  int leaf_dim = 0;      // p
  int manifold_dim = 0;  // n
  std::vector<std::vector<double>> ambient;
  std::vector<int> leaf_id;
  std::vector<double> scales;       // torus model: circle circumferences
  std::vector<double> fiber_phase;  // hopf model: phase along the fiber
  double metric_scale = 1.0;

  int size() const override { return static_cast<int>(ambient.size()); }
  double distance(int i, int j) const override;

  // Intrinsic distance inside a leaf; defined for same-leaf pairs. For the
  // built-in models this is the analytic leaf metric; custom clouds fall back
  // to the ambient restriction.
  double leafwise_distance(int i, int j) const;

  int leaf_count() const;
  const std::vector<std::vector<int>>& leaf_members() const;
  FiniteMetricSpace leaf_metric(int leaf) const;

  // Model leaf/manifold volumes in the current metric scale; nullopt for
  // custom clouds (condition checks report "not checkable").
  std::optional<double> model_leaf_volume() const;
  std::optional<double> model_manifold_volume() const;

  bool has_dense() const { return dense_.has_value(); }
  const FiniteMetricSpace& dense() const { return *dense_; }
  void set_dense(FiniteMetricSpace space) { dense_ = std::move(space); }
  // Builds the dense matrix when the point count is at most `limit`.
  void materialize(int limit, int threads = 1);

  FoliatedSample rescaled(double factor) const;
  FoliatedSample normalized_to_unit_diameter() const;

  void check_well_formed() const;

private:
  std::optional<FiniteMetricSpace> dense_;
  mutable std::optional<std::vector<std::vector<int>>> leaves_cache_;
};

// Flat torus T^n with leaves the cosets of the coordinate subtorus spanned by
// the last p coordinates. The base grid on the first n-p coordinates is
// equispaced for a circle base and a Kronecker lattice otherwise; fiber
// points are seeded-uniform per leaf.
FoliatedSample sample_torus_fibration(int manifold_dim, int leaf_dim, int leaves, int per_leaf,
                                      std::span<const double> scales, std::uint64_t seed);

// Unit S^3 foliated by Hopf circle fibers (p=1, n=3). Base points are a
// Fibonacci lattice on S^2; each fiber carries equispaced phases with a
// seeded offset.
FoliatedSample sample_hopf(int fibers, int per_fiber, std::uint64_t seed);

// Base point on S^2 under the Hopf map for one fiber of a hopf sample.
std::vector<double> hopf_base_point(const FoliatedSample& sample, int leaf);

// Great-circle distance between unit vectors, stable near both poles.
double sphere_distance(std::span<const double> a, std::span<const double> b);

enum class LeafSpaceMode { ChainInfimum, LeafwiseHausdorff };

struct LeafSpace {
  FiniteMetricSpace space;  // metric over leaf indices
  std::vector<int> leaf_sizes;
  LeafSpaceMode mode = LeafSpaceMode::ChainInfimum;
};

// Quotient leaf-space metric. Chain-infimum mode closes the pairwise leaf
// set-distances under shortest paths (the finite-chain infimum of the
// quotient construction); the leafwise-Hausdorff mode takes pairwise
// Hausdorff distances with no closure. Both results are validated as metrics
// and a failure signals a broken sampler.
LeafSpace leaf_space(const FoliatedSample& sample, LeafSpaceMode mode, int threads = 1);

enum class TriState { Holds, Fails, Inconclusive };

struct BroaderRow {
  double delta = 0.0;
  long cap_b_lower = 0;  // certified lower bound on Cap(delta, B)
  long cap_a_ref = 0;    // exact Cap(delta, A), or an upper bound when inexact
  bool a_exact = false;
  bool b_exact = false;
  TriState status = TriState::Inconclusive;
};

struct BroaderReport {
  TriState overall = TriState::Inconclusive;
  std::vector<BroaderRow> rows;
  bool holds() const { return overall == TriState::Holds; }
};

// B broader than A: Cap(delta, B) >= Cap(delta, A) at every grid delta.
// One-sided sound: a certified lower bound on the B side is compared against
// an exact value or upper bound on the A side, so Holds is never a false
// positive; Fails requires exact values on both sides.
BroaderReport check_broader(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                            std::span<const double> deltas);

struct LeafFitRow {
  int leaf = -1;
  bool fit_ok = false;
  double p_hat = 0.0;
  double c_leaf = 0.0;
  double theta_leaf = 0.0;
  std::string note;
};

struct ClassConditionReport {
  // (1) leafwise ball disjointness transfers to the manifold.
  double cond1_verified_up_to = 0.0;  // largest scale with no violation
  double cond1_vacuous_above = 0.0;   // no testable pairs beyond this scale
  std::optional<double> cond1_first_violation;
  bool cond1_pass = false;

  // (2) Bishop constants of leaves and manifold against C.
  std::vector<LeafFitRow> leaf_fits;
  double max_c_leaf = 0.0;
  double min_theta_leaf = 0.0;
  double c_manifold = 0.0;
  double theta_manifold = 0.0;
  bool cond2_c_pass = false;
  bool cond2_theta_leq_c = false;   // the stated direction
  bool cond2_theta_geq_inv = false;  // the direction useful to the estimates
  std::string cond2_note;

  // (3) leaf volumes within [1/C, C].
  bool cond3_checkable = false;
  std::vector<double> leaf_volumes;
  bool cond3_pass = false;

  int leaves_sampled = 0;
  bool leaves_subsampled = false;
};

ClassConditionReport check_class_conditions(const FoliatedSample& sample, double d, double c,
                                            std::uint64_t seed);

struct ComparabilityReport {
  double pointwise_worst_ratio = 0.0;
  double leafspace_worst_ratio = 0.0;
  bool pass = false;
};

// Verifies (1/C) rho <= rho' <= C rho for the leaf-space metrics built from
// two C-comparable metrics on the same foliated point set. Throws a
// precondition error with a witness pair when pointwise comparability fails.
ComparabilityReport metric_comparability(const FoliatedSample& base, const FoliatedSample& alt,
                                         double c);

// Epsilon-graph geodesic fallback for user-supplied point clouds: connects
// points within `connect_radius` (Euclidean) and closes under shortest
// paths. Errors when the graph is disconnected.
FiniteMetricSpace graph_geodesic_metric(const std::vector<std::vector<double>>& points,
                                        double connect_radius);

}  // namespace ghcert
