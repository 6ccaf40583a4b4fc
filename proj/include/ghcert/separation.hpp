#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ghcert/foliation.hpp"
#include "ghcert/gh_bounds.hpp"

namespace ghcert {

struct SeparationRow {
  double r = 0.0;
  long k = 0;        // certified lower bound on Cap(r/2, leaf space of M)
  long l_prime = 0;  // min over sampled leaves of M' of Cap(r/2, leaf)
  long l = 0;        // max over sampled leaves of M of the maximal leaf packing
  double a = 0.0;    // k * l'
  double b = 0.0;    // k * l
  double ratio = 0.0;
  bool leaf_below_floor = false;  // r/2 under a sampled leaf's resolution floor
  bool base_below_floor = false;  // r/2 under a leaf space's resolution floor
  bool packing_replay_ok = false;  // k*l' witness pairwise >= r in M'
  bool cover_replay_ok = false;    // k*l centers cover M at radius C*r
  bool analytic_a_ok = false;      // l' >= 2^p' / (C^2 r^p')
  bool analytic_b_ok = false;      // l  <= 2^p C^(p+2) / r^p
};

struct SeparationConstants {
  double c = 1.0;
  double d = 0.0;  // class scale bound; 0 when unspecified
  int p = 0;
  int n = 0;
  int p_prime = 0;
  int n_prime = 0;
};

struct SeparationReport {
  std::vector<SeparationRow> rows;
  double fitted_exponent = 0.0;  // slope of log(A/B) against log r, valid rows only
  int valid_rows = 0;
  BroaderReport broader;
  bool broader_overridden = false;
  bool normalized = false;
  bool leaves_subsampled = false;
  SeparationConstants constants;
  std::optional<GhBoundCertificate> certificate;
  double certificate_eps0 = 0.0;  // grid value whose C*eps0 scan fired
};

struct SeparationOptions {
  bool normalize = true;
  bool override_broader = false;
  int threads = 1;
  std::uint64_t seed = 0;
  double class_d = 0.0;  // informational; 0 = unspecified
};

// Builds the A(r)/B(r) table of the separation construction for two foliated
// samples with leaf dimensions p < p'. Per radius: k disjoint (r/2)-balls in
// the leaf space of M, l' the min per-leaf packing in M', l the max per-leaf
// maximal packing in M; A = k*l' certifies Cap(r/2, M') from below (replayed
// on the witness set) and B = k*l witnesses Cov(C*r, M) from above (replayed
// as an explicit cover). The exponent of A/B against r is fitted on rows
// above the resolution floors.
SeparationReport separation_scan(const FoliatedSample& m, const FoliatedSample& m_prime,
                                 std::span<const double> r_grid, double c,
                                 const SeparationOptions& options = {});

// Scans candidate eps0 over the report grid in descending order and fires the
// Cov/Cap lower-bound certificate directly on the ambient samples at
// eps = C * eps0. Sound independently of the A/B bookkeeping. Stores the
// certificate in the report and returns it; inconclusive is a normal outcome.
std::optional<GhBoundCertificate> separation_certificate(SeparationReport& report,
                                                         const FoliatedSample& m,
                                                         const FoliatedSample& m_prime);

}  // namespace ghcert
