#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "hgut/distribution.hpp"
#include "hgut/grid.hpp"

namespace hgut::graphs {

/// Edge classes of the hypergrid edge graph H under a distribution ell:
///  - Zero:   ell(x) == ell(y) (within 1e-12 relative),
///  - Uneven: weight w >= m/(m+1),
///  - Even:   0 < w < m/(m+1), carrying a scale kappa >= 1 with
///            m^-kappa < w <= m^-(kappa-1),
/// where w = |ell(x) - ell(y)| / max(ell(x), ell(y)).
enum class EdgeTag { Zero, Uneven, Even };

struct EdgeClass {
  EdgeTag tag = EdgeTag::Zero;
  int scale = 0;        // kappa, set for Even edges
  double weight = 0.0;  // undefined (0) for Zero edges
};

/// Directed edge (x, i, b): from x to x^{(i)->b}. Source stored as a
/// row-major point index.
struct DirectedEdge {
  std::int64_t src = 0;
  int coord = 0;
  Symbol dest = 0;
};

/// Undirected edge in canonical form: endpoint with the smaller symbol at
/// the differing coordinate, paired with the larger symbol b > x_coord.
struct UndirectedEdge {
  std::int64_t x = 0;
  int coord = 0;
  Symbol b = 0;
};

/// Which subgraph a directed edge belongs to.
enum class SubgraphId { Zero, Uneven, Scale, Remaining };

/// Classify every undirected edge of H under ell (dense, <= 10^4 cells).
/// m_ref overrides the max side used in the thresholds; 0 means use
/// ell's own max side. The override matters when ell is a projection of a
/// larger grid whose global m drives the constants.
std::vector<std::pair<UndirectedEdge, EdgeClass>> classify_edges(const Distribution& ell,
                                                                 int m_ref = 0);

/// Scale cap: edges with weight below m^-kappa_max fall into the final bucket.
int scale_cap(const GridShape& shape, int m_ref);

/// The full orientation G of H: uneven edges point from higher to lower mass;
/// zero edges point to the lexicographically larger endpoint; even edges at
/// scale kappa whose endpoints have no outgoing uneven edge along the edge
/// direction are oriented by the max-degree peel order rho_kappa; the
/// remaining even edges point away from an endpoint owning an outgoing uneven
/// edge in the same direction.
class OrientedEdgeSet {
 public:
  const GridShape& shape() const { return shape_; }
  int m_ref() const { return m_ref_; }

  const std::vector<DirectedEdge>& zero_edges() const { return zero_; }
  const std::vector<DirectedEdge>& uneven_edges() const { return uneven_; }
  const std::vector<DirectedEdge>& remaining_edges() const { return remaining_; }
  const std::map<int, std::vector<DirectedEdge>>& scale_edges() const { return scale_; }

  /// Peel order for scale kappa: rank[point index] in [0, N); lower rank =
  /// deleted earlier = edge source. Identity-like orders exist only for
  /// scales that have edges.
  const std::vector<std::int64_t>& peel_rank(int kappa) const;
  std::vector<int> scales() const;

  /// Class of the undirected edge through (x, i, b); b != x_i required.
  EdgeClass edge_class(std::int64_t x, int coord, Symbol b) const;
  /// True iff the directed edge (x -> x^{(i)->b}) is in the orientation.
  bool oriented_out(std::int64_t x, int coord, Symbol b) const;
  /// Subgraph of the directed edge (only meaningful when oriented_out).
  SubgraphId subgraph_of(std::int64_t x, int coord, Symbol b) const;
  /// True iff (x -> x^{(i)->b}) is a directed edge of the named subgraph.
  bool in_subgraph(SubgraphId g, int kappa, std::int64_t x, int coord, Symbol b) const;

  int outdeg_uneven(std::int64_t x) const;
  int outdeg_uneven_along(std::int64_t x, int coord) const;
  int outdeg_scale(int kappa, std::int64_t x) const;
  int outdeg_zero(std::int64_t x) const;
  int outdeg_remaining(std::int64_t x) const;
  /// Out-degree over G' = uneven + all scales + remaining (zero excluded).
  int outdeg_gprime(std::int64_t x) const;
  /// Out-degree over the whole orientation G.
  int outdeg_total(std::int64_t x) const;

  std::int64_t num_undirected_edges() const { return num_undirected_; }
  /// All outgoing directed edges of x in G, as (coord, dest) pairs.
  std::vector<std::pair<int, Symbol>> outgoing(std::int64_t x) const;

  std::string to_dot() const;  // debugging dump for small grids

 private:
  friend OrientedEdgeSet build_orientation(const Distribution& ell, int m_ref);
  friend OrientedEdgeSet corrupt_orientation_for_testing(const OrientedEdgeSet& g);

  struct Info {
    EdgeClass cls;
    bool out = false;       // this direction is the oriented one
    bool in_scale = false;  // Even edge placed in a scale graph (vs remaining)
  };

  std::uint64_t key(std::int64_t x, int coord, Symbol b) const;
  const Info* find(std::int64_t x, int coord, Symbol b) const;
  void index_edges();

  GridShape shape_{std::vector<int>{2}};
  int m_ref_ = 2;
  std::unordered_map<std::uint64_t, Info> info_;
  std::vector<DirectedEdge> zero_, uneven_, remaining_;
  std::map<int, std::vector<DirectedEdge>> scale_;
  std::map<int, std::vector<std::int64_t>> peel_rank_;
  std::vector<int> outdeg_uneven_, outdeg_zero_, outdeg_remaining_;
  std::unordered_map<std::uint64_t, int> outdeg_uneven_dir_;  // key(x, coord, 0)
  std::map<int, std::vector<int>> outdeg_scale_;
  std::int64_t num_undirected_ = 0;
};

/// Build the orientation for a dense ell (<= 10^4 cells).
OrientedEdgeSet build_orientation(const Distribution& ell, int m_ref = 0);

/// Out-degree of a point in the selected subgraph (kappa used for Scale).
int outdegree(const Point& x, SubgraphId g, int kappa, const OrientedEdgeSet& E);

/// Flip one oriented edge; breaks the construction invariants on purpose so
/// fault-injection tests can confirm the auditors notice.
OrientedEdgeSet corrupt_orientation_for_testing(const OrientedEdgeSet& g);

}  // namespace hgut::graphs
