#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ghcert/metric_space.hpp"
#include "ghcert/nets.hpp"

namespace ghcert {

// Matched equal-size nets with their covering radii and distortion; replays
// the 3*max(r_x, r_y, distortion) upper bound.
struct MatchedNetsEvidence {
  std::vector<int> x_net;
  std::vector<int> y_tuple;
  double r_x = 0.0;
  double r_y = 0.0;
  double distortion = 0.0;
};

// Cov(eps, X) upper bound strictly below Cap(3*eps, Y) lower bound; replays
// the d_GH > eps certificate.
struct CovCapEvidence {
  double epsilon = 0.0;
  CoveringResult cover_x;   // at eps on X
  PackingResult packing_y;  // at 3*eps on Y
};

// Exhaustive scan of distinct k-tuples of Y against a minimum eps-net of X:
// no tuple reached distortion <= 2*eps. The best tuple found is stored so the
// distortion claim is replayable; exhaustiveness itself is attested by the
// enumeration count.
struct NetDistortionEvidence {
  double epsilon = 0.0;
  std::vector<int> x_net;
  std::vector<int> best_tuple;
  double best_distortion = 0.0;
  std::uint64_t tuples_checked = 0;
};

struct GhBoundCertificate {
  enum class Kind { Upper, Lower };
  Kind kind = Kind::Upper;
  double value = 0.0;
  std::variant<MatchedNetsEvidence, CovCapEvidence, NetDistortionEvidence> evidence;
};

// d_GH(X, Y) <= 3*max(r_x, r_y, distortion) for any matched k-point tuples.
// The X side is a farthest-point k-net; the Y side is found exhaustively when
// C(|Y|,k)*k! <= 1e6, otherwise by seeded restart local search capped at
// `budget` tuple evaluations. Any search quality yields a valid certificate.
GhBoundCertificate upper_bound_via_nets(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                        int k, std::uint64_t budget, std::uint64_t seed);

// Lemma: if Cov(eps, X) < Cap(3*eps, Y) then d_GH(X, Y) > eps. Uses greedy
// one-sided bounds on both sides so soundness never depends on optimality.
std::optional<GhBoundCertificate> lower_bound_capcov(const DistanceOracle& x,
                                                     const DistanceOracle& y, double epsilon);

enum class NetDistortionStatus { Fired, NotFired, Inconclusive };

struct NetDistortionOutcome {
  NetDistortionStatus status = NetDistortionStatus::Inconclusive;
  std::optional<GhBoundCertificate> certificate;
  std::string note;
};

// Contrapositive of the net-transfer lemma: fixes a minimum-size exact
// eps-net of X (size k <= k_max <= 5) and exhaustively checks all ordered
// distinct k-tuples of Y; fires d_GH > eps if none has distortion <= 2*eps.
// Requires |Y| >= k and C(|Y|,k)*k! <= 1e7, else Inconclusive.
NetDistortionOutcome lower_bound_net_distortion(const FiniteMetricSpace& x,
                                                const FiniteMetricSpace& y, double epsilon,
                                                int k_max);

struct GhScanRow {
  double epsilon = 0.0;
  int cov_x_upper = 0;
  int cap_y_lower = 0;
  bool fired = false;
};

struct GhScanResult {
  std::optional<GhBoundCertificate> lower;
  std::optional<GhBoundCertificate> upper;
  std::vector<GhScanRow> rows;
};

// Lower scan over the eps grid plus upper bounds over the net-size schedule;
// raises internal-inconsistency if a lower certificate exceeds an upper one.
GhScanResult gh_scan(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                     std::span<const double> eps_grid, std::span<const int> net_sizes,
                     std::uint64_t budget, std::uint64_t seed);

// Re-verifies a certificate from its stored evidence alone (no search).
bool replay_certificate(const GhBoundCertificate& cert, const DistanceOracle& x,
                        const DistanceOracle& y);

}  // namespace ghcert
