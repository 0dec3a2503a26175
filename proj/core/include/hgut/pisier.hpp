#pragma once

#include <cstdint>
#include <vector>

#include "hgut/edge_graphs.hpp"
#include "hgut/fourier.hpp"
#include "hgut/grid.hpp"
#include "hgut/report.hpp"
#include "hgut/rng.hpp"

namespace hgut::pisier {

using fourier::ComplexField;
using fourier::Cplx;

/// An orientation of the hypergrid edge graph H: every undirected edge
/// {x, x^{(i)->b}} appears with exactly one direction.
class Orientation {
 public:
  static Orientation from_edge_set(const graphs::OrientedEdgeSet& g);
  /// Each edge flips a fair coin for its direction.
  static Orientation random(const GridShape& shape, Rng& rng);

  const GridShape& shape() const { return shape_; }
  /// Outgoing directed edges of the point with this row-major index,
  /// as (coord, dest symbol) pairs.
  const std::vector<std::pair<int, Symbol>>& outgoing(std::int64_t x) const {
    return out_[static_cast<std::size_t>(x)];
  }
  std::int64_t num_edges() const;

 private:
  explicit Orientation(GridShape shape);
  GridShape shape_{std::vector<int>{2}};
  std::vector<std::vector<std::pair<int, Symbol>>> out_;
};

/// RHS of the plain coordinate-Laplacian inequality:
///   ( E_{x,y} | sum_i L_i f(x) * sum_{a in Z*_{m_i}} w^{-a y_i} w^{a x_i} |^s )^{1/s}.
/// Exhaustive over all (x, y) pairs; total_size <= 200.
double plain_rhs(const ComplexField& f, double s);

/// RHS of the orientation-robust inequality:
///   ( E_{x,y} | sum_i sum_a sum_{d: (x,x^{(i)->x_i+d}) in G}
///       (1 - w^{ad}) w^{-a y_i} w^{a x_i} L_i^{x_i+d} f(x) |^s )^{1/s}.
double robust_rhs(const ComplexField& f, double s, const Orientation& G);

/// Exact spectral identity behind the smoothing argument: for mean-zero f,
///   sum_{u != 0} t^{#u-1} (#u)^{gamma+1} f_hat(u) conj(g_hat(u))
///     = 1/(1-t) * E_{x,y}[ conj(g_{t,1-t}(x,y)) *
///         sum_i sum_{a in Z*} w^{-a y_i} w^{a x_i} L_i Delta^gamma f(x) ].
/// Both sides evaluated exhaustively; |LHS - RHS| asserted within tol.
verify::VerificationReport check_smoothing_identity(const ComplexField& f,
                                                    const ComplexField& g, double t,
                                                    double gamma, double tol = 1e-8);

/// Exact regrouping identity: the ungrouped double-counted sum over all
/// b in Z_{m_i} equals the orientation-grouped sum with (1 - w^{ad}) factors,
///   E_{x,y}[ conj(g_{t,1-t}) sum_i sum_a sum_b w^{-ay_i} w^{ax_i} L_i^b Dg f(x) ]
///     = E_{x,y}[ conj(g_{t,1-t}) sum_i sum_a sum_{d:(x,..)in G}
///                (1-w^{ad}) w^{-ay_i} w^{ax_i} L_i^{x_i+d} Dg f(x) ].
verify::VerificationReport check_orientation_grouping_identity(const ComplexField& f,
                                                               const ComplexField& g, double t,
                                                               double gamma,
                                                               const Orientation& G,
                                                               double tol = 1e-8);

}  // namespace hgut::pisier
