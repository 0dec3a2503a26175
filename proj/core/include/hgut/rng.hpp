#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hgut {

/// Seeded random generator with reproducible distributions.
///
/// The engine is std::mt19937_64 (its output sequence is pinned by the
/// standard). All derived distributions (canonical doubles, integers, normal,
/// gamma, subset sampling) are implemented here rather than via <random>
/// distribution objects, whose algorithms differ between standard libraries.
/// Identical seeds therefore give identical transcripts on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 bits.
  double canonical();

  /// Uniform integer in [0, n), n >= 1. Rejection-sampled, unbiased.
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi);

  bool bernoulli(double p) { return canonical() < p; }

  /// +1 or -1 with equal probability.
  int sign();

  /// Standard normal via Box-Muller (caches the spare deviate).
  double normal();

  /// Gamma(alpha, 1) via Marsaglia-Tsang; alpha > 0.
  double gamma(double alpha);

  /// Symmetric Dirichlet(alpha) over k categories.
  std::vector<double> dirichlet(double alpha, std::size_t k);

  /// Each index in [0, n) independently with probability sigma.
  std::vector<int> bernoulli_subset(int n, double sigma);

  /// Uniformly random t-subset of [0, n), returned sorted.
  std::vector<int> uniform_subset(int n, int t);

  /// Child generator for an independent stream; deterministic in (seed, stream).
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

/// SplitMix64 mixing step; used for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace hgut
