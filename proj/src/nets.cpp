#include "ghcert/nets.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>

namespace ghcert {

Net greedy_net(const DistanceOracle& space, double epsilon) {
  if (!(epsilon > 0.0)) throw invalid_argument_error("net radius must be positive");
  const int n = space.size();
  if (n == 0) throw invalid_argument_error("net of an empty space");

  Net net;
  net.radius = epsilon;
  net.centers.push_back(0);
  std::vector<double> to_set(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) to_set[static_cast<std::size_t>(j)] = space.distance(0, j);

  for (;;) {
    int farthest = 0;
    for (int j = 1; j < n; ++j)
      if (to_set[static_cast<std::size_t>(j)] > to_set[static_cast<std::size_t>(farthest)])
        farthest = j;
    if (to_set[static_cast<std::size_t>(farthest)] < epsilon) break;
    net.centers.push_back(farthest);
    for (int j = 0; j < n; ++j)
      to_set[static_cast<std::size_t>(j)] =
          std::min(to_set[static_cast<std::size_t>(j)], space.distance(farthest, j));
  }
  return net;
}

std::vector<int> farthest_point_centers(const DistanceOracle& space, int k) {
  const int n = space.size();
  if (k < 1 || k > n) throw invalid_argument_error("center count out of range");
  std::vector<int> centers{0};
  std::vector<double> to_set(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) to_set[static_cast<std::size_t>(j)] = space.distance(0, j);
  while (static_cast<int>(centers.size()) < k) {
    int farthest = 0;
    for (int j = 1; j < n; ++j)
      if (to_set[static_cast<std::size_t>(j)] > to_set[static_cast<std::size_t>(farthest)])
        farthest = j;
    centers.push_back(farthest);
    for (int j = 0; j < n; ++j)
      to_set[static_cast<std::size_t>(j)] =
          std::min(to_set[static_cast<std::size_t>(j)], space.distance(farthest, j));
  }
  return centers;
}

double net_covering_radius(const DistanceOracle& space, std::span<const int> centers) {
  if (centers.empty()) throw invalid_argument_error("empty center set");
  double worst = 0.0;
  for (int j = 0; j < space.size(); ++j) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int c : centers) nearest = std::min(nearest, space.distance(c, j));
    worst = std::max(worst, nearest);
  }
  return worst;
}

bool is_valid_net(const DistanceOracle& space, std::span<const int> centers, double radius) {
  if (centers.empty()) return false;
  for (int c : centers)
    if (c < 0 || c >= space.size()) return false;
  return net_covering_radius(space, centers) < radius;
}

bool is_valid_packing(const DistanceOracle& space, std::span<const int> centers, double epsilon) {
  for (std::size_t a = 0; a < centers.size(); ++a) {
    if (centers[a] < 0 || centers[a] >= space.size()) return false;
    for (std::size_t b = a + 1; b < centers.size(); ++b)
      if (space.distance(centers[a], centers[b]) < 2.0 * epsilon) return false;
  }
  return !centers.empty();
}

namespace {

// ---- greedy cover over dynamic bitsets -------------------------------------

struct BitRows {
  int n = 0;
  std::size_t words = 0;
  std::vector<std::uint64_t> bits;  // row-major n x words

  std::uint64_t* row(int i) { return bits.data() + static_cast<std::size_t>(i) * words; }
  const std::uint64_t* row(int i) const {
    return bits.data() + static_cast<std::size_t>(i) * words;
  }
};

BitRows ball_membership(const DistanceOracle& space, double epsilon) {
  BitRows rows;
  rows.n = space.size();
  rows.words = (static_cast<std::size_t>(rows.n) + 63) / 64;
  rows.bits.assign(static_cast<std::size_t>(rows.n) * rows.words, 0);
  for (int c = 0; c < rows.n; ++c) {
    std::uint64_t* r = rows.row(c);
    for (int j = 0; j < rows.n; ++j)
      if (space.distance(c, j) < epsilon) r[j / 64] |= (1ULL << (j % 64));
  }
  return rows;
}

std::vector<int> greedy_cover_centers(const BitRows& balls) {
  const int n = balls.n;
  const std::size_t words = balls.words;
  std::vector<std::uint64_t> uncovered(words, 0);
  for (int j = 0; j < n; ++j) uncovered[static_cast<std::size_t>(j) / 64] |= (1ULL << (j % 64));

  auto gain = [&](int c) {
    const std::uint64_t* r = balls.row(c);
    int count = 0;
    for (std::size_t w = 0; w < words; ++w) count += std::popcount(r[w] & uncovered[w]);
    return count;
  };

  // Lazy greedy: cached gains only shrink, so the popped entry whose
  // recomputed gain matches its cached key is the exact (max gain, lowest
  // index) choice of a full scan.
  std::priority_queue<std::pair<int, int>> heap;  // (gain, -center)
  for (int c = 0; c < n; ++c) heap.push({gain(c), -c});

  std::vector<int> centers;
  int remaining = n;
  while (remaining > 0) {
    const auto [cached, neg] = heap.top();
    heap.pop();
    const int c = -neg;
    const int actual = gain(c);
    if (actual != cached) {
      heap.push({actual, neg});
      continue;
    }
    const std::uint64_t* r = balls.row(c);
    for (std::size_t w = 0; w < words; ++w) uncovered[w] &= ~r[w];
    centers.push_back(c);
    remaining -= actual;
  }
  return centers;
}

// ---- exact set cover (n <= 24) ---------------------------------------------

struct CoverSolver {
  int n = 0;
  std::uint32_t full = 0;
  std::vector<std::uint32_t> masks;  // ball of each center
  int best_size = 0;
  std::vector<int> best;
  std::vector<int> chosen;
  int max_ball = 1;

  void run(std::uint32_t covered) {
    if (covered == full) {
      if (static_cast<int>(chosen.size()) < best_size) {
        best_size = static_cast<int>(chosen.size());
        best = chosen;
      }
      return;
    }
    const int uncovered_count = std::popcount(full & ~covered);
    const int lower = (uncovered_count + max_ball - 1) / max_ball;
    if (static_cast<int>(chosen.size()) + lower >= best_size) return;

    // Branch on the uncovered point with the fewest candidate balls.
    int pivot = -1;
    int fewest = n + 1;
    for (int p = 0; p < n; ++p) {
      if (covered & (1u << p)) continue;
      int options = 0;
      for (int c = 0; c < n; ++c)
        if (masks[static_cast<std::size_t>(c)] & (1u << p)) ++options;
      if (options < fewest) {
        fewest = options;
        pivot = p;
      }
    }

    std::vector<int> candidates;
    for (int c = 0; c < n; ++c)
      if (masks[static_cast<std::size_t>(c)] & (1u << pivot)) candidates.push_back(c);
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      return std::popcount(masks[static_cast<std::size_t>(a)] & ~covered) >
             std::popcount(masks[static_cast<std::size_t>(b)] & ~covered);
    });
    for (int c : candidates) {
      chosen.push_back(c);
      run(covered | masks[static_cast<std::size_t>(c)]);
      chosen.pop_back();
    }
  }
};

// ---- exact max packing via max clique on the compatibility graph -----------

struct CliqueSolver {
  int n = 0;
  std::vector<std::uint64_t> adj;  // compatibility: d(i,j) >= 2*eps
  std::vector<int> best;
  std::vector<int> current;

  // Tomita-style branch and bound with greedy coloring bounds.
  void expand(std::uint64_t candidates) {
    if (candidates == 0) {
      if (current.size() > best.size()) best = current;
      return;
    }
    // Greedy coloring of the candidate set; color numbers bound the clique.
    std::vector<int> order;
    std::vector<int> color;
    std::uint64_t rest = candidates;
    int color_class = 0;
    while (rest != 0) {
      ++color_class;
      std::uint64_t available = rest;
      while (available != 0) {
        const int v = std::countr_zero(available);
        order.push_back(v);
        color.push_back(color_class);
        available &= ~(1ULL << v);
        available &= ~adj[static_cast<std::size_t>(v)];
        rest &= ~(1ULL << v);
      }
    }
    for (int idx = static_cast<int>(order.size()) - 1; idx >= 0; --idx) {
      if (current.size() + static_cast<std::size_t>(color[static_cast<std::size_t>(idx)]) <=
          best.size())
        return;
      const int v = order[static_cast<std::size_t>(idx)];
      current.push_back(v);
      expand(candidates & adj[static_cast<std::size_t>(v)]);
      current.pop_back();
      candidates &= ~(1ULL << v);
    }
  }
};

}  // namespace

CoveringResult covering_number(const DistanceOracle& space, double epsilon, BoundMode mode) {
  if (!(epsilon > 0.0)) throw invalid_argument_error("covering radius must be positive");
  const int n = space.size();
  if (n == 0) throw invalid_argument_error("covering of an empty space");

  CoveringResult result;
  result.mode = mode;
  result.below_floor = epsilon < 2.0 * space.fill_radius();
  result.net.radius = epsilon;

  if (mode == BoundMode::Greedy) {
    const BitRows balls = ball_membership(space, epsilon);
    result.net.centers = greedy_cover_centers(balls);
    result.count = static_cast<int>(result.net.centers.size());
    return result;
  }

  if (n > kExactCoverLimit)
    throw size_limit_error("exact covering limited to n <= 24; use greedy mode");

  CoverSolver solver;
  solver.n = n;
  solver.full = (n == 32) ? 0xffffffffu : ((1u << n) - 1u);
  solver.masks.resize(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    std::uint32_t m = 0;
    for (int j = 0; j < n; ++j)
      if (space.distance(c, j) < epsilon) m |= (1u << j);
    solver.masks[static_cast<std::size_t>(c)] = m;
    solver.max_ball = std::max(solver.max_ball, std::popcount(m));
  }
  // Greedy solution seeds the incumbent.
  const BitRows balls = ball_membership(space, epsilon);
  solver.best = greedy_cover_centers(balls);
  solver.best_size = static_cast<int>(solver.best.size());
  solver.run(0);

  result.net.centers = solver.best;
  std::sort(result.net.centers.begin(), result.net.centers.end());
  result.count = static_cast<int>(result.net.centers.size());
  return result;
}

PackingResult packing_number(const DistanceOracle& space, double epsilon, BoundMode mode) {
  if (!(epsilon > 0.0)) throw invalid_argument_error("packing radius must be positive");
  const int n = space.size();
  if (n == 0) throw invalid_argument_error("packing of an empty space");

  PackingResult result;
  result.mode = mode;
  result.epsilon = epsilon;
  result.below_floor = epsilon < 2.0 * space.fill_radius();

  if (mode == BoundMode::Greedy) {
    for (int i = 0; i < n; ++i) {
      bool ok = true;
      for (int c : result.centers)
        if (space.distance(i, c) < 2.0 * epsilon) {
          ok = false;
          break;
        }
      if (ok) result.centers.push_back(i);
    }
    result.count = static_cast<int>(result.centers.size());
    return result;
  }

  if (n > kExactPackingLimit)
    throw size_limit_error("exact packing limited to n <= 40; use greedy mode");

  CliqueSolver solver;
  solver.n = n;
  solver.adj.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && space.distance(i, j) >= 2.0 * epsilon)
        solver.adj[static_cast<std::size_t>(i)] |= (1ULL << j);
  const std::uint64_t all = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  solver.expand(all);

  result.centers = solver.best;
  std::sort(result.centers.begin(), result.centers.end());
  result.count = static_cast<int>(result.centers.size());
  return result;
}

}  // namespace ghcert
