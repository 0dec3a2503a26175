#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hgut/grid.hpp"
#include "hgut/rng.hpp"

namespace hgut {

/// Dense tables refuse to materialize above this many cells unless a caller
/// passes an explicit cap.
inline constexpr std::int64_t kDefaultDenseCap = 1'000'000;

/// A probability distribution over a hypergrid Z_M.
///
/// Two bodies: a dense table (one probability per point, row-major) or a
/// product form (one categorical weight vector per coordinate). Instances are
/// immutable after construction and safe to share across threads. Dense
/// tables and product marginals are normalized at construction; inputs whose
/// mass deviates from 1 by more than 1e-9 are rejected.
class Distribution {
 public:
  enum class Body { Dense, Product };

  static Distribution dense(GridShape shape, std::vector<double> mass,
                            std::int64_t cap = kDefaultDenseCap);
  static Distribution product(GridShape shape, std::vector<std::vector<double>> marginals);
  static Distribution uniform(GridShape shape);  // product form

  const GridShape& shape() const { return shape_; }
  Body body() const { return body_; }
  bool is_dense() const { return body_ == Body::Dense; }

  double mass_at(const Point& p) const;
  double mass_at_index(std::int64_t idx) const;  // dense only

  const std::vector<double>& dense_table() const;
  const std::vector<double>& marginal_weights(int i) const;  // product only

  /// Marginal probability Pr[x_i = a].
  double coordinate_marginal(int i, Symbol a) const;

  /// Dense copy (product forms are expanded; obeys the cap).
  Distribution to_dense(std::int64_t cap = kDefaultDenseCap) const;

  Point sample(Rng& rng) const;

 private:
  Distribution(GridShape shape, Body body);

  GridShape shape_;
  Body body_;
  std::vector<double> table_;                  // dense
  std::vector<double> cdf_;                    // dense, cumulative
  std::vector<std::vector<double>> marginals_; // product
  std::vector<std::vector<double>> marginal_cdfs_;
};

/// d_TV(p, U) = (1/2) sum_x |p(x) - 1/|Z_M||.
/// Product forms are expanded to dense first (the per-coordinate composition
/// formula is not valid for TV), so total_size must be within the cap.
double tv_to_uniform(const Distribution& p, std::int64_t cap = kDefaultDenseCap);

/// Marginal distribution of x_S for a sorted nonempty S.
Distribution project(const Distribution& p, const std::vector<int>& coords);

/// Conditional distribution of x_{stars(rho)} given the fixed coordinates.
/// Throws ZeroMassSubcubeError if the subcube carries no mass and
/// ArgumentError if rho has no stars (a 0-dimensional result is not
/// representable; callers own that degenerate case).
Distribution restricted(const Distribution& p, const Restriction& rho);

/// Bias mu_i^{c,d}(p) = (Pr[x_i=c] - Pr[x_i=d]) / (Pr[x_i=c] + Pr[x_i=d]),
/// with 0 when both probabilities vanish and 0 when c == d.
double bias(const Distribution& p, int i, Symbol c, Symbol d);

/// The full bias vector: one m_i x m_i matrix per coordinate holding every
/// mu_i^{c,d}. Antisymmetric with zero diagonal, entries in [-1, 1].
class BiasVector {
 public:
  static BiasVector of(const Distribution& p);

  const GridShape& shape() const { return shape_; }
  double entry(int i, Symbol c, Symbol d) const;
  /// Row-major m_i x m_i matrix of coordinate i.
  const std::vector<double>& matrix(int i) const;
  double l2_norm() const;

 private:
  explicit BiasVector(GridShape shape) : shape_(std::move(shape)) {}
  GridShape shape_{std::vector<int>{2}};
  std::vector<std::vector<double>> matrices_;
};

/// l2 norm of the full bias vector (all i and all ordered pairs (c,d)).
double bias_norm(const Distribution& p);

/// rho ~ D_sigma(p): S ~ S_sigma (each coordinate independently with
/// probability sigma), x ~ p; stars on S, x elsewhere.
Restriction draw_restriction_sigma(const Distribution& p, double sigma, Rng& rng);

/// rho ~ D(t, p): uniformly random t-subset of stars, y ~ p elsewhere.
Restriction draw_restriction_t(const Distribution& p, int t, Rng& rng);

/// The k-th hypercube projection p^(k), k in [1, m^2].
///
/// Pairs (c,d) of Z_{m_i}^2 are ordered row-major; coordinate i uses the
/// min(k, m_i^2)-th pair. The output lives on shape (2,...,2) with symbol 0
/// standing for bit +1 and symbol 1 for bit -1. A coordinate whose pair is
/// diagonal (c == d) maps every symbol to a fresh random bit, so its bias is
/// exactly 0. Dense inputs are pushed forward exactly; product inputs stay in
/// product form.
Distribution hypercube_projection(const Distribution& p, int k);

/// Pair (c_i, d_i) used by hypercube_projection at coordinate i.
std::pair<Symbol, Symbol> projection_pair(int k, int side);

/// Mean vector of a distribution on shape (2,...,2): mu_i = Pr[sym 0] - Pr[sym 1].
std::vector<double> hypercube_mean_vector(const Distribution& p);

/// Exact two-sided evaluation of the restriction decomposition bound
///   d_TV(p,U) <= E_{S~S_sigma}[d_TV(p_{complement(S)},U)]
///              + E_{rho~D_sigma(p)}[d_TV(p_|rho,U)].
/// Both expectations are finite sums over all 2^n star sets, weighted by
/// sigma^|S| (1-sigma)^{n-|S|} and subcube masses. d_TV over an empty
/// coordinate set is 0 by convention (the sigma = 0 edge); zero-mass subcubes
/// contribute zero weight.
struct TvDecompositionReport {
  double lhs = 0.0;
  double projection_term = 0.0;
  double restriction_term = 0.0;
  double rhs = 0.0;
  bool holds = false;
};
TvDecompositionReport tv_decomposition_check(const Distribution& p, double sigma);

}  // namespace hgut
