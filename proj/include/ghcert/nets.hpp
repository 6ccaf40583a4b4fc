#pragma once

#include <span>
#include <vector>

#include "ghcert/metric_space.hpp"

namespace ghcert {

// Open-ball cover witness: every point of the host lies within distance
// < radius of some center.
struct Net {
  std::vector<int> centers;
  double radius = 0.0;
};

enum class BoundMode { Exact, Greedy };

struct CoveringResult {
  int count = 0;
  Net net;             // replayable witness cover
  BoundMode mode = BoundMode::Greedy;  // greedy = certified upper bound on Cov
  bool below_floor = false;            // epsilon < 2 * fill radius of the host
};

struct PackingResult {
  int count = 0;
  std::vector<int> centers;  // pairwise distance >= 2*epsilon, replayable
  double epsilon = 0.0;
  BoundMode mode = BoundMode::Greedy;  // greedy = certified lower bound on Cap
  bool below_floor = false;
};

// Farthest-point insertion from index 0, ties broken by lowest index.
Net greedy_net(const DistanceOracle& space, double epsilon);

// Farthest-point insertion to exactly k centers (k >= 1), same tie rule.
std::vector<int> farthest_point_centers(const DistanceOracle& space, int k);

// Max over points of the distance to its nearest center.
double net_covering_radius(const DistanceOracle& space, std::span<const int> centers);

// Cov(eps, X): minimum number of open eps-balls covering X. Exact mode solves
// the ball set cover by branch and bound (n <= 24); greedy mode repeatedly
// takes the ball covering the most uncovered points (ties by lowest center)
// and certifies an upper bound.
CoveringResult covering_number(const DistanceOracle& space, double epsilon, BoundMode mode);

// Cap(eps, X): maximum number of centers with pairwise distance >= 2*eps
// (disjoint open eps-balls in length spaces). Exact mode solves max
// independent set on the conflict graph by branch and bound (n <= 40); greedy
// mode scans in index order and certifies a lower bound.
PackingResult packing_number(const DistanceOracle& space, double epsilon, BoundMode mode);

// Replay checks used by certificate verification.
bool is_valid_net(const DistanceOracle& space, std::span<const int> centers, double radius);
bool is_valid_packing(const DistanceOracle& space, std::span<const int> centers, double epsilon);

constexpr int kExactCoverLimit = 24;
constexpr int kExactPackingLimit = 40;

}  // namespace ghcert
