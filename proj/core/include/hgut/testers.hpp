#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hgut/oracle.hpp"

namespace hgut::testers {

enum class Decision { Accept, Reject };

struct TraceNode {
  std::string label;
  Decision decision = Decision::Accept;
  double stat = 0.0;
  int depth = 0;
  std::vector<TraceNode> children;
};

struct Verdict {
  Decision decision = Decision::Accept;
  LedgerSnapshot queries;  // cumulative ledger at completion
  TraceNode trace;
  int depth_max = 0;
};

enum class Mode { Theory, Practical };

/// Every constant of the testing stack, in one place. Theory mode carries the
/// published formula constants (astronomical at desk scale; it always lands
/// in the base case for small n, consistent with its regime). Practical mode
/// keeps the identical control flow with calibrated desk-scale constants,
/// frozen after a one-time calibration run.
struct TesterConfig {
  Mode mode = Mode::Practical;

  // sigma(eps) = min(sigma_max, 1 / (c0 * ln^4(16/eps))).
  double c0 = 0.0167;
  double sigma_max = 0.2;
  // Base-case gate: main path iff exp(-sigma * n / gate_divisor) <= eps/8.
  double gate_divisor = 1.0;

  // L = c_L * m^mexp_L * sqrt(n) / eps.
  double c_L = 0.5;
  double mexp_L = 1.0;

  // Loop 1: s_j = floor(c_s1 * 8 L log2(2L) * 2^-j) restriction draws; dyadic
  // buckets whose scaled count rounds to zero are skipped.
  double c_s1 = 0.02;
  // Loop 2: s'_j = floor(c_s2 * (32/eps) log2(4/eps) * 2^-j) draws.
  double c_s2 = 0.02;
  // Repetitions of the projected tester per restriction: odd(ceil(c_r * log2(n m / eps))).
  double c_r = 0.75;
  // Recursive repetitions: odd(ceil(c_trep * log2(16/eps))).
  double c_trep = 0.35;

  // Coarse stage: N = ceil(c_ct * m * ln(m n + 1)) samples.
  double c_ct = 40.0;
  // Mean-tester repetitions per projection: odd(ceil(c_pr * log2(m+1))).
  double c_pr = 1.0;
  // Mean-tester samples: N = ceil(c_mt * max(1/(eps^2 sqrt(n)), 1/eps)).
  double c_mt = 50.0;
  // Accept iff the pairwise statistic Z <= tau * eps^2 * n.
  double tau = 0.5;

  // Base case: N = ceil(c_bc * sqrt(total_size) / eps^2) samples.
  double c_bc = 10.0;
  std::int64_t base_case_cap = std::int64_t{1} << 20;

  int max_depth = 10;
  std::uint64_t seed = 0;

  static TesterConfig practical(std::uint64_t seed);
  static TesterConfig theory(std::uint64_t seed);

  double sigma(double eps) const;
  bool base_case_gate(int n, double eps) const;  // true: route to the base case
  /// A recursive call on this sub-shape can run: either the gate keeps it on
  /// the main path, or its flattened domain fits under the base-case cap.
  /// Restrictions that fail this are skipped by the recursion stage, exactly
  /// like the ones keeping more than 2 sigma n stars.
  bool recursion_executable(const GridShape& sub_shape, double eps) const;

  std::int64_t mean_tester_samples(int n, double eps) const;
  std::int64_t coarse_test_samples(int n, int m) const;
  int mean_tester_reps(int m) const;
  int projected_reps(int n, int m, double eps) const;
  int recursion_reps(double eps) const;
  /// Query count of an accepting projected_test_mean run (no early reject).
  std::int64_t projected_test_mean_accept_samples(int n, int m, double eps) const;
  std::int64_t base_case_samples(std::int64_t total_size, double eps) const;

  void validate() const;
};

using BitSampler = std::function<std::vector<std::int8_t>()>;

/// Hypercube mean tester on a +-1 sample stream: draws N samples, computes
/// the unbiased pairwise statistic
///   Z = 2/(N(N-1)) * sum_{j<k} <x_j, x_k>   (estimates ||mu||_2^2)
/// and accepts iff Z <= tau * eps^2 * n (reject scale ||mu||_2 >= eps sqrt(n)).
Verdict mean_tester(const BitSampler& stream, int n, double eps, const TesterConfig& cfg);

/// Marginal band check: N samples; rejects iff some symbol count leaves
/// [N/(2 m_i), 2N/m_i].
Verdict coarse_test(SubcubeOracle& oracle, const TesterConfig& cfg);

/// Coarse test, then the mean tester on every hypercube projection p^(k)
/// with parameter eps/(2m), repeated with majority votes.
Verdict projected_test_mean(SubcubeOracle& oracle, double eps, const TesterConfig& cfg);

/// Collision-count uniformity test over the flattened domain; stands in for
/// the tiny-n regime. Requires total_size <= cfg.base_case_cap.
Verdict base_case_tester(SubcubeOracle& oracle, double eps, const TesterConfig& cfg);

/// The recursive subcube-conditioning uniformity tester; eps in (0, 1/2].
Verdict sub_cond_uni(SubcubeOracle& oracle, double eps, const TesterConfig& cfg);

/// rho ~ D_sigma(p) drawn through the oracle: one all-stars query for x plus
/// an independent coordinate subset.
Restriction draw_restriction_via_oracle(SubcubeOracle& oracle, double sigma);

}  // namespace hgut::testers
