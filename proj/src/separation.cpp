#include "ghcert/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "ghcert/nets.hpp"
#include "ghcert/rng.hpp"

namespace ghcert {

namespace {

constexpr int kLeafSampleCap = 64;

struct LeafData {
  int leaf = -1;
  FiniteMetricSpace metric;
  double floor = 0.0;  // 2 * fill radius
};

std::vector<int> pick_leaves(const FoliatedSample& sample, std::uint64_t seed, std::uint64_t tag,
                             bool* subsampled) {
  const int m = sample.leaf_count();
  if (m <= kLeafSampleCap) {
    if (subsampled) *subsampled = false;
    std::vector<int> all(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  if (subsampled) *subsampled = true;
  SplitMix64 rng = substream(seed, tag);
  auto chosen = sample_without_replacement(m, kLeafSampleCap, rng);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

SeparationReport separation_scan(const FoliatedSample& m_in, const FoliatedSample& mp_in,
                                 std::span<const double> r_grid, double c,
                                 const SeparationOptions& options) {
  if (!(c >= 1.0)) throw invalid_argument_error("constant C must be >= 1");
  if (r_grid.empty()) throw invalid_argument_error("radius grid must be nonempty");
  for (std::size_t i = 0; i + 1 < r_grid.size(); ++i)
    if (!(r_grid[i] < r_grid[i + 1]))
      throw invalid_argument_error("radius grid must be strictly increasing");
  for (double r : r_grid)
    if (!(r > 0.0)) throw invalid_argument_error("radius grid must be positive");

  m_in.check_well_formed();
  mp_in.check_well_formed();
  if (!(m_in.leaf_dim < mp_in.leaf_dim))
    throw precondition_error("separation needs leaf dimensions p < p'");

  const FoliatedSample m = options.normalize ? m_in.normalized_to_unit_diameter() : m_in;
  const FoliatedSample mp = options.normalize ? mp_in.normalized_to_unit_diameter() : mp_in;

  SeparationReport report;
  report.normalized = options.normalize;
  report.constants = {c,
                      options.class_d,
                      m.leaf_dim,
                      m.manifold_dim,
                      mp.leaf_dim,
                      mp.manifold_dim};

  const LeafSpace ls_m = leaf_space(m, LeafSpaceMode::ChainInfimum, options.threads);
  const LeafSpace ls_mp = leaf_space(mp, LeafSpaceMode::ChainInfimum, options.threads);

  // Broader precondition on the half-radius grid.
  std::vector<double> deltas;
  deltas.reserve(r_grid.size());
  for (double r : r_grid) deltas.push_back(r / 2.0);
  report.broader = check_broader(ls_m.space, ls_mp.space, deltas);
  if (report.broader.overall == TriState::Fails)
    throw precondition_error("leaf space of M' is not broader than leaf space of M");
  if (report.broader.overall == TriState::Inconclusive) {
    if (!options.override_broader)
      throw precondition_error(
          "broader relation inconclusive; pass the override to proceed anyway");
    report.broader_overridden = true;
  }

  bool sub_m = false;
  bool sub_mp = false;
  std::vector<int> m_leaves = pick_leaves(m, options.seed, 0x6d5f6c65ULL, &sub_m);
  std::vector<int> mp_leaves = pick_leaves(mp, options.seed, 0x6d705f6cULL, &sub_mp);
  report.leaves_subsampled = sub_m || sub_mp;

  // The witness construction needs per-leaf data for every base-packing
  // leaf, so those are merged into the sampled sets.
  auto with_extra = [](std::vector<int> base, const std::vector<int>& extra) {
    std::set<int> merged(base.begin(), base.end());
    merged.insert(extra.begin(), extra.end());
    return std::vector<int>(merged.begin(), merged.end());
  };

  const bool exact_base_m = ls_m.space.size() <= kExactPackingLimit;
  const bool exact_base_mp = ls_mp.space.size() <= kExactPackingLimit;
  const double base_floor =
      2.0 * std::max(ls_m.space.fill_radius(), ls_mp.space.fill_radius());

  // Collect every base-packing leaf over the whole grid first, then build
  // per-leaf metrics once.
  std::vector<PackingResult> base_pack_m(r_grid.size());
  std::vector<PackingResult> base_pack_mp(r_grid.size());
  std::vector<int> m_witness_leaves;
  std::vector<int> mp_witness_leaves;
  for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
    const double half = r_grid[ri] / 2.0;
    base_pack_m[ri] = packing_number(
        ls_m.space, half, exact_base_m ? BoundMode::Exact : BoundMode::Greedy);
    base_pack_mp[ri] = packing_number(
        ls_mp.space, half, exact_base_mp ? BoundMode::Exact : BoundMode::Greedy);
    m_witness_leaves.insert(m_witness_leaves.end(), base_pack_m[ri].centers.begin(),
                            base_pack_m[ri].centers.end());
    mp_witness_leaves.insert(mp_witness_leaves.end(), base_pack_mp[ri].centers.begin(),
                             base_pack_mp[ri].centers.end());
  }
  m_leaves = with_extra(std::move(m_leaves), m_witness_leaves);
  mp_leaves = with_extra(std::move(mp_leaves), mp_witness_leaves);

  auto build_leaf_data = [](const FoliatedSample& sample, const std::vector<int>& leaves) {
    std::vector<LeafData> data;
    data.reserve(leaves.size());
    for (int leaf : leaves) {
      LeafData d;
      d.leaf = leaf;
      d.metric = sample.leaf_metric(leaf);
      d.floor = 2.0 * d.metric.fill_radius();
      data.push_back(std::move(d));
    }
    return data;
  };
  const std::vector<LeafData> m_leaf_data = build_leaf_data(m, m_leaves);
  const std::vector<LeafData> mp_leaf_data = build_leaf_data(mp, mp_leaves);

  auto leaf_index_of = [](const std::vector<LeafData>& data, int leaf) {
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data[i].leaf == leaf) return i;
    throw internal_inconsistency_error("witness leaf missing from the sampled set");
  };

  double max_leaf_floor = 0.0;
  for (const auto& d : m_leaf_data) max_leaf_floor = std::max(max_leaf_floor, d.floor);
  for (const auto& d : mp_leaf_data) max_leaf_floor = std::max(max_leaf_floor, d.floor);

  for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
    const double r = r_grid[ri];
    const double half = r / 2.0;

    SeparationRow row;
    row.r = r;
    row.leaf_below_floor = half < max_leaf_floor;
    row.base_below_floor = half < base_floor;
    row.k = base_pack_m[ri].count;

    // Per-leaf packings: greedy scan keeps them maximal, which the doubling
    // cover replay on the M side relies on.
    std::vector<PackingResult> mp_leaf_pack(mp_leaf_data.size());
    long l_prime = std::numeric_limits<long>::max();
    for (std::size_t li = 0; li < mp_leaf_data.size(); ++li) {
      mp_leaf_pack[li] = packing_number(mp_leaf_data[li].metric, half, BoundMode::Greedy);
      l_prime = std::min(l_prime, static_cast<long>(mp_leaf_pack[li].count));
    }
    std::vector<PackingResult> m_leaf_pack(m_leaf_data.size());
    long l = 0;
    for (std::size_t li = 0; li < m_leaf_data.size(); ++li) {
      m_leaf_pack[li] = packing_number(m_leaf_data[li].metric, half, BoundMode::Greedy);
      l = std::max(l, static_cast<long>(m_leaf_pack[li].count));
    }
    row.l_prime = l_prime;
    row.l = l;
    row.a = static_cast<double>(row.k) * static_cast<double>(l_prime);
    row.b = static_cast<double>(row.k) * static_cast<double>(l);
    row.ratio = row.b > 0 ? row.a / row.b : 0.0;

    // Eq. (4) replay: base packing of the leaf space of M' (first k leaves)
    // crossed with l' points of each leaf's packing must be pairwise >= r
    // in M'. Cross-leaf separation follows from the leaf-space packing; the
    // same-leaf part is exactly the class disjointness transfer.
    {
      const long k_avail = std::min<long>(row.k, base_pack_mp[ri].count);
      std::vector<int> witness;
      bool witness_complete = k_avail == row.k;
      for (long bi = 0; bi < k_avail; ++bi) {
        const int leaf = base_pack_mp[ri].centers[static_cast<std::size_t>(bi)];
        const std::size_t li = leaf_index_of(mp_leaf_data, leaf);
        const auto& members = mp.leaf_members()[static_cast<std::size_t>(leaf)];
        const auto& pack = mp_leaf_pack[li];
        if (static_cast<long>(pack.centers.size()) < l_prime) {
          witness_complete = false;
          break;
        }
        for (long pi = 0; pi < l_prime; ++pi)
          witness.push_back(members[static_cast<std::size_t>(pack.centers[static_cast<std::size_t>(pi)])]);
      }
      row.packing_replay_ok =
          witness_complete && !witness.empty() && is_valid_packing(mp, witness, half);
    }

    // Cover replay: the union of maximal leaf packings over M's own base
    // packing leaves must cover M at radius C*r.
    {
      std::vector<int> centers;
      for (int leaf : base_pack_m[ri].centers) {
        const std::size_t li = leaf_index_of(m_leaf_data, leaf);
        const auto& members = m.leaf_members()[static_cast<std::size_t>(leaf)];
        for (int local : m_leaf_pack[li].centers)
          centers.push_back(members[static_cast<std::size_t>(local)]);
      }
      row.cover_replay_ok = !centers.empty() &&
                            static_cast<long>(centers.size()) <= row.k * row.l &&
                            net_covering_radius(m, centers) < c * r;
    }

    // Analytic forms of the proof as inequality cross-checks; they hold when
    // C honestly bounds the class constants.
    row.analytic_a_ok =
        static_cast<double>(l_prime) >=
        std::pow(2.0, mp.leaf_dim) / (c * c * std::pow(r, mp.leaf_dim));
    row.analytic_b_ok =
        static_cast<double>(l) <=
        std::pow(2.0, m.leaf_dim) * std::pow(c, m.leaf_dim + 2) / std::pow(r, m.leaf_dim);

    report.rows.push_back(std::move(row));
  }

  // Log-log fit of A/B over rows above the leaf resolution floor.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& row : report.rows) {
    if (row.leaf_below_floor || !(row.ratio > 0.0)) continue;
    const double lx = std::log(row.r);
    const double ly = std::log(row.ratio);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  report.valid_rows = count;
  if (count >= 2) {
    const double denom = count * sxx - sx * sx;
    if (std::abs(denom) > 0.0) report.fitted_exponent = (count * sxy - sx * sy) / denom;
  }
  return report;
}

std::optional<GhBoundCertificate> separation_certificate(SeparationReport& report,
                                                         const FoliatedSample& m_in,
                                                         const FoliatedSample& mp_in) {
  if (report.rows.empty()) throw precondition_error("separation report has no rows");
  const FoliatedSample m = report.normalized ? m_in.normalized_to_unit_diameter() : m_in;
  const FoliatedSample mp = report.normalized ? mp_in.normalized_to_unit_diameter() : mp_in;

  const double c = report.constants.c;
  // Descending scan returns the largest firing candidate.
  for (std::size_t i = report.rows.size(); i-- > 0;) {
    const double eps0 = report.rows[i].r;
    auto cert = lower_bound_capcov(m, mp, c * eps0);
    if (cert) {
      report.certificate = cert;
      report.certificate_eps0 = eps0;
      return cert;
    }
  }
  return std::nullopt;
}

}  // namespace ghcert
