#include "ghcert/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace ghcert {

namespace {

constexpr double kTriangleRelTol = 1e-9;

std::string violation_message(const MetricViolation& v) {
  std::ostringstream out;
  switch (v.kind) {
    case MetricViolation::Kind::NotSquare:
      out << "matrix is not square";
      break;
    case MetricViolation::Kind::NonFinite:
      out << "non-finite entry at (" << v.i << "," << v.j << ")";
      break;
    case MetricViolation::Kind::NonzeroDiagonal:
      out << "nonzero diagonal at index " << v.i << " (value " << v.lhs << ")";
      break;
    case MetricViolation::Kind::Asymmetry:
      out << "asymmetry at (" << v.i << "," << v.j << "): " << v.lhs << " vs " << v.rhs;
      break;
    case MetricViolation::Kind::NonPositive:
      out << "nonpositive distance " << v.lhs << " between distinct points (" << v.i << ","
          << v.j << ")";
      break;
    case MetricViolation::Kind::Triangle:
      out << "triangle violation at (" << v.i << "," << v.j << "," << v.k << "): d(i,j)="
          << v.lhs << " > d(i,k)+d(k,j)=" << v.rhs;
      break;
  }
  return out.str();
}

}  // namespace

double DistanceOracle::diameter() const {
  const int n = size();
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) best = std::max(best, distance(i, j));
  return best;
}

double DistanceOracle::fill_radius() const {
  const int n = size();
  if (n <= 1) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      nearest = std::min(nearest, distance(i, j));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

std::string MetricError::kind_name(MetricViolation::Kind kind) {
  switch (kind) {
    case MetricViolation::Kind::NotSquare: return "metric-not-square";
    case MetricViolation::Kind::NonFinite: return "metric-non-finite";
    case MetricViolation::Kind::NonzeroDiagonal: return "metric-nonzero-diagonal";
    case MetricViolation::Kind::Asymmetry: return "metric-asymmetry";
    case MetricViolation::Kind::NonPositive: return "metric-nonpositive";
    case MetricViolation::Kind::Triangle: return "metric-triangle-violation";
  }
  return "metric-error";
}

FiniteMetricSpace FiniteMetricSpace::trusted(int n, std::vector<double> flat,
                                             std::vector<std::string> labels) {
  if (n < 0 || flat.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw invalid_argument_error("distance matrix size does not match point count");
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(n))
    throw invalid_argument_error("label count does not match point count");
  FiniteMetricSpace space;
  space.n_ = n;
  space.dist_ = std::move(flat);
  space.labels_ = std::move(labels);
  return space;
}

FiniteMetricSpace FiniteMetricSpace::validated(int n, std::vector<double> flat,
                                               std::vector<std::string> labels) {
  auto fail = [](MetricViolation v) -> void { throw MetricError(v, violation_message(v)); };

  if (n < 0 || flat.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    fail({MetricViolation::Kind::NotSquare, n, static_cast<int>(flat.size()), -1, 0, 0});

  const auto at = [&](int i, int j) -> double {
    return flat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(j)];
  };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(at(i, j)))
        fail({MetricViolation::Kind::NonFinite, i, j, -1, at(i, j), 0});

  for (int i = 0; i < n; ++i)
    if (at(i, i) != 0.0)
      fail({MetricViolation::Kind::NonzeroDiagonal, i, i, -1, at(i, i), 0});

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (at(i, j) != at(j, i))
        fail({MetricViolation::Kind::Asymmetry, i, j, -1, at(i, j), at(j, i)});

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!(at(i, j) > 0.0))
        fail({MetricViolation::Kind::NonPositive, i, j, -1, at(i, j), 0});

  // d(i,j) <= d(i,k) + d(k,j) up to a relative rounding allowance. The k-major
  // inner loop keeps the scan contiguous.
  for (int i = 0; i < n; ++i) {
    const double* ri = flat.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const double dik = ri[k];
      const double* rk = flat.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(n);
      for (int j = 0; j < n; ++j) {
        const double sum = dik + rk[j];
        if (ri[j] > sum + kTriangleRelTol * sum)
          fail({MetricViolation::Kind::Triangle, i, j, k, ri[j], sum});
      }
    }
  }

  return trusted(n, std::move(flat), std::move(labels));
}

FiniteMetricSpace FiniteMetricSpace::validated(const std::vector<std::vector<double>>& rows,
                                               std::vector<std::string> labels) {
  const int n = static_cast<int>(rows.size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (const auto& row : rows) {
    if (row.size() != static_cast<std::size_t>(n)) {
      MetricViolation v{MetricViolation::Kind::NotSquare, n, static_cast<int>(row.size()), -1, 0, 0};
      throw MetricError(v, violation_message(v));
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return validated(n, std::move(flat), std::move(labels));
}

FiniteMetricSpace FiniteMetricSpace::rescaled(double factor) const {
  if (!(factor > 0.0)) throw invalid_argument_error("rescale factor must be positive");
  std::vector<double> flat = dist_;
  for (double& v : flat) v *= factor;
  return trusted(n_, std::move(flat), labels_);
}

FiniteMetricSpace FiniteMetricSpace::restricted(std::span<const int> subset) const {
  const int m = static_cast<int>(subset.size());
  std::vector<double> flat(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  std::vector<std::string> sub_labels;
  if (!labels_.empty()) sub_labels.reserve(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    if (subset[static_cast<std::size_t>(a)] < 0 || subset[static_cast<std::size_t>(a)] >= n_)
      throw invalid_argument_error("restriction index out of range");
    for (int b = 0; b < m; ++b)
      flat[static_cast<std::size_t>(a) * static_cast<std::size_t>(m) + static_cast<std::size_t>(b)] =
          distance(subset[static_cast<std::size_t>(a)], subset[static_cast<std::size_t>(b)]);
  }
  if (!labels_.empty())
    for (int a = 0; a < m; ++a)
      sub_labels.push_back(labels_[static_cast<std::size_t>(subset[static_cast<std::size_t>(a)])]);
  return trusted(m, std::move(flat), std::move(sub_labels));
}

FiniteMetricSpace FiniteMetricSpace::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != n_)
    throw invalid_argument_error("permutation size does not match point count");
  return restricted(perm);
}

std::vector<int> open_ball(const DistanceOracle& space, int center, double radius) {
  if (!(radius > 0.0)) throw invalid_argument_error("ball radius must be positive");
  if (center < 0 || center >= space.size()) throw invalid_argument_error("ball center out of range");
  std::vector<int> members;
  for (int j = 0; j < space.size(); ++j)
    if (space.distance(center, j) < radius) members.push_back(j);
  return members;
}

double hausdorff_distance(const DistanceOracle& space, std::span<const int> a,
                          std::span<const int> b) {
  if (a.empty() || b.empty())
    throw invalid_argument_error("hausdorff distance requires nonempty subsets");
  auto one_sided = [&](std::span<const int> from, std::span<const int> to) {
    double worst = 0.0;
    for (int p : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (int q : to) nearest = std::min(nearest, space.distance(p, q));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

namespace {

// Distortion of a correspondence given as a list of (x, y) cells.
double correspondence_distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                 const std::vector<std::pair<int, int>>& pairs) {
  double dis = 0.0;
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a; b < pairs.size(); ++b) {
      const double dx = x.distance(pairs[a].first, pairs[b].first);
      const double dy = y.distance(pairs[a].second, pairs[b].second);
      dis = std::max(dis, std::abs(dx - dy));
    }
  return dis;
}

}  // namespace

double gh_oracle_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  const int nx = x.size();
  const int ny = y.size();
  if (nx == 0 || ny == 0) throw invalid_argument_error("gh oracle requires nonempty spaces");
  const long cells = static_cast<long>(nx) * static_cast<long>(ny);
  if (cells > 12)
    throw size_limit_error("gh oracle limited to |X|*|Y| <= 12 (full correspondence enumeration)");

  // Subset of cells encoded as a bitmask; valid correspondences project onto
  // both factors (every row and column hit).
  const std::uint32_t full = (1u << cells) - 1u;
  std::vector<std::uint32_t> row_mask(static_cast<std::size_t>(nx), 0);
  std::vector<std::uint32_t> col_mask(static_cast<std::size_t>(ny), 0);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const std::uint32_t bit = 1u << (i * ny + j);
      row_mask[static_cast<std::size_t>(i)] |= bit;
      col_mask[static_cast<std::size_t>(j)] |= bit;
    }

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, int>> pairs;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    bool valid = true;
    for (int i = 0; i < nx && valid; ++i) valid = (mask & row_mask[static_cast<std::size_t>(i)]) != 0;
    for (int j = 0; j < ny && valid; ++j) valid = (mask & col_mask[static_cast<std::size_t>(j)]) != 0;
    if (!valid) continue;
    pairs.clear();
    for (int c = 0; c < cells; ++c)
      if (mask & (1u << c)) pairs.emplace_back(c / ny, c % ny);
    best = std::min(best, correspondence_distortion(x, y, pairs));
    if (best == 0.0) break;
  }
  return 0.5 * best;
}

double gh_bijection_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  const int n = x.size();
  if (n != y.size()) throw invalid_argument_error("bijection bound requires equal cardinalities");
  if (n > 7) throw size_limit_error("bijection bound limited to |X| <= 7");
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  double best = std::numeric_limits<double>::infinity();
  do {
    double dis = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        dis = std::max(dis, std::abs(x.distance(a, b) -
                                     y.distance(perm[static_cast<std::size_t>(a)],
                                                perm[static_cast<std::size_t>(b)])));
    best = std::min(best, dis);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return 0.5 * best;
}

}  // namespace ghcert
