#pragma once

#include <span>
#include <string>
#include <vector>

#include "ghcert/errors.hpp"

namespace ghcert {

// Read-only pairwise-distance access. Dense matrices and model-backed
// samples (which compute distances on demand) both implement it, so the
// net/cover/pack machinery runs on either without materializing n x n
// storage for large samples.
class DistanceOracle {
public:
  virtual ~DistanceOracle() = default;
  virtual int size() const = 0;
  virtual double distance(int i, int j) const = 0;

  double diameter() const;
  // Max over points of the distance to the nearest other point; the
  // empirical resolution floor of a sampled space. 0 for a single point.
  double fill_radius() const;
};

// Witness of the first violated metric axiom, reported by validation.
struct MetricViolation {
  enum class Kind { NotSquare, NonFinite, NonzeroDiagonal, Asymmetry, NonPositive, Triangle };
  Kind kind;
  int i = -1;
  int j = -1;
  int k = -1;
  double lhs = 0.0;
  double rhs = 0.0;
};

class MetricError : public Error {
public:
  MetricError(MetricViolation violation, const std::string& message)
      : Error(kind_name(violation.kind), message), violation_(violation) {}

  const MetricViolation& violation() const { return violation_; }
  static std::string kind_name(MetricViolation::Kind kind);

private:
  MetricViolation violation_;
};

// A validated finite metric space: symmetric nonnegative matrix, zero
// diagonal, positive off-diagonal, triangle inequality up to a relative
// 1e-9 tolerance. Immutable after construction.
class FiniteMetricSpace final : public DistanceOracle {
public:
  FiniteMetricSpace() = default;

  // Validates all axioms; throws MetricError naming the first violation.
  static FiniteMetricSpace validated(int n, std::vector<double> flat,
                                     std::vector<std::string> labels = {});
  static FiniteMetricSpace validated(const std::vector<std::vector<double>>& rows,
                                     std::vector<std::string> labels = {});

  // For matrices that are metrics by construction (analytic model distances,
  // shortest-path closures). Validation of the builders is covered by tests;
  // this skips the O(n^3) triangle scan on large instances.
  static FiniteMetricSpace trusted(int n, std::vector<double> flat,
                                   std::vector<std::string> labels = {});

  int size() const override { return n_; }
  double distance(int i, int j) const override {
    return dist_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                 static_cast<std::size_t>(j)];
  }

  std::span<const double> row(int i) const {
    return {dist_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_),
            static_cast<std::size_t>(n_)};
  }
  const std::vector<double>& flat() const { return dist_; }
  const std::vector<std::string>& labels() const { return labels_; }

  FiniteMetricSpace rescaled(double factor) const;
  FiniteMetricSpace restricted(std::span<const int> subset) const;
  FiniteMetricSpace permuted(std::span<const int> perm) const;

private:
  int n_ = 0;
  std::vector<double> dist_;
  std::vector<std::string> labels_;
};

// Open ball {j : d(center, j) < radius}; always contains the center.
std::vector<int> open_ball(const DistanceOracle& space, int center, double radius);

// Hausdorff distance between two nonempty subsets of one space.
double hausdorff_distance(const DistanceOracle& space, std::span<const int> a,
                          std::span<const int> b);

// Exact Gromov-Hausdorff distance by full enumeration of correspondences
// (subsets of X x Y projecting onto both factors). Requires |X|*|Y| <= 12.
double gh_oracle_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y);

// Minimum distortion over bijections only; an upper bound on 2*d_GH that can
// miss the optimum (correspondences need not be bijections). |X| == |Y| <= 7.
double gh_bijection_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y);

}  // namespace ghcert
