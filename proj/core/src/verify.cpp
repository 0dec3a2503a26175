#include "hgut/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "hgut/errors.hpp"

namespace hgut::verify {

using graphs::EdgeClass;
using graphs::EdgeTag;
using graphs::OrientedEdgeSet;
using graphs::SubgraphId;

double log_factor(int n) { return std::log(static_cast<double>(n) + 2.0); }

std::string VerificationReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"name\":\"" << name << "\",\"instance\":\"" << instance << "\",\"lhs\":" << lhs
     << ",\"rhs\":" << rhs << ",\"ratio\":" << ratio << ",\"deviation\":" << deviation
     << ",\"tolerance\":" << tolerance << ",\"identity\":" << (is_identity ? "true" : "false")
     << ",\"vacuous\":" << (vacuous ? "true" : "false")
     << ",\"holds\":" << (holds ? "true" : "false") << ",\"cases\":" << cases_checked
     << ",\"premise_cases\":" << premise_cases << "}";
  return os.str();
}

namespace {

constexpr double kHardSlack = 1e-9;

double edge_weight(double a, double b) {
  const double hi = std::max(a, b);
  if (hi <= 0.0) return 0.0;
  return std::abs(a - b) / hi;
}

VerificationReport base_report(std::string name, const Distribution& d) {
  VerificationReport rep;
  rep.name = std::move(name);
  rep.instance = d.shape().to_string();
  return rep;
}

}  // namespace

VerificationReport audit_orientation(const Distribution& ell, const OrientedEdgeSet& G) {
  VerificationReport rep = base_report("orientation_audit", ell);
  const GridShape& shape = ell.shape();
  if (shape.total_size() > 2000) throw CapacityError("audit_orientation: grid too large");
  const int m = G.m_ref();
  const double uneven_threshold = static_cast<double>(m) / (m + 1.0);
  const int cap = graphs::scale_cap(shape, m);
  bool ok = true;

  // Collect directed edges per subgraph into an oriented-edge lookup.
  std::map<std::tuple<std::int64_t, int, Symbol>, int> directed;  // -> subgraph marker
  auto add = [&](const std::vector<graphs::DirectedEdge>& edges, int tag) {
    for (const auto& e : edges) {
      auto key = std::make_tuple(e.src, e.coord, e.dest);
      if (directed.count(key)) ok = false;  // same directed edge twice
      directed[key] = tag;
    }
  };
  add(G.zero_edges(), 0);
  add(G.uneven_edges(), 1);
  add(G.remaining_edges(), 2);
  for (const auto& [kappa, edges] : G.scale_edges()) add(edges, 100 + kappa);

  // Partition: every undirected edge of H appears exactly once, in exactly
  // one direction; recompute its class from scratch.
  std::int64_t undirected = 0;
  Point x;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, x);
    const double px = ell.mass_at_index(idx);
    for (int i = 0; i < shape.n(); ++i) {
      const Symbol a = x[static_cast<std::size_t>(i)];
      for (Symbol b = a + 1; b < shape.side(i); ++b) {
        ++undirected;
        const std::int64_t y = shape.index_of(with_coordinate(x, i, b));
        const double py = ell.mass_at_index(y);
        const bool fwd = directed.count({idx, i, b}) > 0;
        const bool bwd = directed.count({y, i, a}) > 0;
        if (fwd == bwd) {  // both oriented or neither: partition broken
          ok = false;
          continue;
        }
        const int tag = fwd ? directed[{idx, i, b}] : directed[{y, i, a}];
        const std::int64_t src = fwd ? idx : y;
        const std::int64_t dst = fwd ? y : idx;
        const int src_coord_sym = fwd ? a : b;
        const Symbol dst_sym = fwd ? b : a;

        const double w = edge_weight(px, py);
        const double hi = std::max(px, py);
        const bool is_zero = hi <= 0.0 || std::abs(px - py) <= 1e-12 * hi;
        if (is_zero) {
          if (tag != 0) ok = false;
          continue;
        }
        if (w >= uneven_threshold) {
          if (tag != 1) ok = false;
          // Mass-descending orientation.
          if (ell.mass_at_index(src) <= ell.mass_at_index(dst)) ok = false;
          continue;
        }
        // Even edge: recompute its scale bracket.
        int kappa = 1;
        while (kappa < cap && w <= std::pow(static_cast<double>(m), -kappa)) ++kappa;
        const bool src_has_uneven = G.outdeg_uneven_along(src, i) > 0;
        const bool dst_has_uneven = G.outdeg_uneven_along(dst, i) > 0;
        if (tag == 2) {
          // Remaining: source must own an outgoing uneven edge this direction.
          if (!src_has_uneven) ok = false;
        } else if (tag >= 100) {
          if (tag != 100 + kappa) ok = false;
          // Exclusion rule: neither endpoint has uneven out along i.
          if (src_has_uneven || dst_has_uneven) ok = false;
          // Orientation respects the peel rank of the edge's own scale.
          const auto& rank = G.peel_rank(tag - 100);
          if (!(rank[static_cast<std::size_t>(src)] < rank[static_cast<std::size_t>(dst)])) {
            ok = false;
          }
        } else {
          ok = false;  // even edge landed in zero/uneven
        }
        (void)src_coord_sym;
        (void)dst_sym;
      }
    }
  }
  if (undirected != G.num_undirected_edges()) ok = false;
  std::int64_t directed_total = static_cast<std::int64_t>(G.zero_edges().size()) +
                                static_cast<std::int64_t>(G.uneven_edges().size()) +
                                static_cast<std::int64_t>(G.remaining_edges().size());
  for (const auto& [kappa, edges] : G.scale_edges()) {
    directed_total += static_cast<std::int64_t>(edges.size());
  }
  if (directed_total != undirected) ok = false;

  // Peel ranks: bijection + max-degree deletion order on the scale graph.
  for (const auto& [kappa, edges] : G.scale_edges()) {
    const auto& rank = G.peel_rank(kappa);
    std::vector<std::int64_t> order(rank.size());
    std::vector<bool> seen(rank.size(), false);
    for (std::size_t v = 0; v < rank.size(); ++v) {
      const auto r = rank[v];
      if (r < 0 || r >= static_cast<std::int64_t>(rank.size()) || seen[static_cast<std::size_t>(r)]) {
        ok = false;
        break;
      }
      seen[static_cast<std::size_t>(r)] = true;
      order[static_cast<std::size_t>(r)] = static_cast<std::int64_t>(v);
    }
    // Re-simulate deletion: degree of the deleted vertex must be maximal
    // among the remaining ones.
    std::vector<int> deg(rank.size(), 0);
    std::vector<std::vector<std::int64_t>> adj(rank.size());
    for (const auto& e : edges) {
      Point p = shape.point_at(e.src);
      const std::int64_t dst = shape.index_of(with_coordinate(p, e.coord, e.dest));
      adj[static_cast<std::size_t>(e.src)].push_back(dst);
      adj[static_cast<std::size_t>(dst)].push_back(e.src);
    }
    for (std::size_t v = 0; v < rank.size(); ++v) {
      deg[v] = static_cast<int>(adj[v].size());
    }
    std::vector<bool> removed(rank.size(), false);
    for (std::size_t step = 0; step < order.size(); ++step) {
      const std::int64_t v = order[step];
      int mx = 0;
      for (std::size_t w = 0; w < rank.size(); ++w) {
        if (!removed[w]) mx = std::max(mx, deg[w]);
      }
      if (deg[static_cast<std::size_t>(v)] != mx) ok = false;
      removed[static_cast<std::size_t>(v)] = true;
      for (std::int64_t w : adj[static_cast<std::size_t>(v)]) {
        if (!removed[static_cast<std::size_t>(w)]) --deg[static_cast<std::size_t>(w)];
      }
      deg[static_cast<std::size_t>(v)] = 0;
    }
  }

  rep.cases_checked = undirected;
  rep.holds = ok;
  rep.tolerance = 0.0;
  return rep;
}

bool peel_indegree_bound_holds(const OrientedEdgeSet& G, int kappa,
                               const std::vector<std::int64_t>& U, std::int64_t v, int g) {
  for (std::int64_t u : U) {
    if (u == v) throw ArgumentError("peel_indegree_bound_holds: v must not be in U");
    if (G.outdeg_scale(kappa, u) > g) {
      throw ArgumentError("peel_indegree_bound_holds: premise violated (outdeg > g)");
    }
  }
  const GridShape& shape = G.shape();
  const Point pv = shape.point_at(v);
  int in_edges = 0;
  for (std::int64_t u : U) {
    const Point pu = shape.point_at(u);
    int diff_coord = -1;
    int diffs = 0;
    for (int i = 0; i < shape.n(); ++i) {
      if (pu[static_cast<std::size_t>(i)] != pv[static_cast<std::size_t>(i)]) {
        diff_coord = i;
        ++diffs;
      }
    }
    if (diffs != 1) continue;  // not adjacent in H
    if (G.in_subgraph(SubgraphId::Scale, kappa, u, diff_coord,
                      pv[static_cast<std::size_t>(diff_coord)])) {
      ++in_edges;
    }
  }
  return in_edges <= g;
}

VerificationReport check_peel_indegree_property(const Distribution& ell, Rng& rng, int probes,
                                                int m_ref) {
  VerificationReport rep = base_report("peel_indegree_bound", ell);
  const OrientedEdgeSet G = graphs::build_orientation(ell, m_ref);
  const std::int64_t size = ell.shape().total_size();
  bool ok = true;
  std::int64_t cases = 0;
  for (int kappa : G.scales()) {
    for (int probe = 0; probe < probes; ++probe) {
      const std::int64_t v = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(size)));
      const int g = 1 + static_cast<int>(rng.below(3));
      std::vector<std::int64_t> U;
      for (std::int64_t u = 0; u < size; ++u) {
        if (u == v) continue;
        if (G.outdeg_scale(kappa, u) <= g && rng.bernoulli(0.5)) U.push_back(u);
      }
      ++cases;
      if (!peel_indegree_bound_holds(G, kappa, U, v, g)) ok = false;
    }
  }
  rep.cases_checked = cases;
  rep.vacuous = (cases == 0);
  rep.holds = ok;
  return rep;
}

VerificationReport check_outdegree_edge_bound(const Distribution& ell, int m_ref) {
  VerificationReport rep = base_report("outdegree_weighted_edge_bound", ell);
  const GridShape& shape = ell.shape();
  const OrientedEdgeSet G = graphs::build_orientation(ell, m_ref);
  const double m = static_cast<double>(G.m_ref());
  bool ok = true;
  double worst_lhs = 0.0, worst_rhs = 0.0;
  Point x;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, x);
    const double px = ell.mass_at_index(idx);
    double lhs = 0.0;
    for (const auto& [i, b] : G.outgoing(idx)) {
      if (G.subgraph_of(idx, i, b) == SubgraphId::Zero) continue;  // G' excludes zero edges
      const double py = ell.mass_at(with_coordinate(x, i, b));
      if (px <= 0.0) {
        // A point with zero mass cannot own a nonzero outgoing edge in G'.
        ok = false;
        continue;
      }
      const double rel = (px - py) / px;
      lhs += rel * rel;
    }
    double rhs = std::pow(m, 3.0) * G.outdeg_uneven(idx);
    for (int kappa : G.scales()) {
      rhs += 4.0 * std::pow(m, -2.0 * kappa + 4.0) * G.outdeg_scale(kappa, idx);
    }
    if (lhs > rhs * (1.0 + 1e-12) + kHardSlack) {
      ok = false;
      if (lhs - rhs > worst_lhs - worst_rhs) {
        worst_lhs = lhs;
        worst_rhs = rhs;
      }
    }
    if (lhs > worst_lhs && ok) {
      worst_lhs = lhs;
      worst_rhs = rhs;
    }
    ++rep.cases_checked;
  }
  rep.lhs = worst_lhs;
  rep.rhs = worst_rhs;
  rep.ratio = VerificationReport::safe_ratio(worst_lhs, worst_rhs);
  rep.tolerance = kHardSlack;
  rep.holds = ok;
  return rep;
}

TvEdgeBoundTerms tv_edge_bound_terms(const Distribution& ell, int m_ref) {
  const GridShape& shape = ell.shape();
  const OrientedEdgeSet G = graphs::build_orientation(ell, m_ref);
  const double m = static_cast<double>(G.m_ref());
  const double logn = log_factor(shape.n());
  const double cells = static_cast<double>(shape.total_size());

  TvEdgeBoundTerms terms;
  terms.lhs_raw = tv_to_uniform(ell) / (std::pow(m, 1.5) * logn * logn);

  double acc = 0.0;
  Point x;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, x);
    double sq = 0.0;
    const double fx = cells * ell.mass_at_index(idx) - 1.0;
    for (const auto& [i, b] : G.outgoing(idx)) {
      const double fy = cells * ell.mass_at(with_coordinate(x, i, b)) - 1.0;
      const double lab = (fx - fy) / static_cast<double>(shape.side(i));
      sq += lab * lab;
    }
    acc += std::sqrt(sq);
  }
  terms.rhs_raw = acc / cells;
  return terms;
}

VerificationReport check_tv_edge_bound(const Distribution& ell, double c_emp, int m_ref) {
  VerificationReport rep = base_report("tv_edge_difference_bound", ell);
  const TvEdgeBoundTerms terms = tv_edge_bound_terms(ell, m_ref);
  rep.lhs = terms.lhs_raw;
  rep.rhs = c_emp * terms.rhs_raw;
  rep.ratio = VerificationReport::safe_ratio(terms.lhs_raw, terms.rhs_raw);
  rep.tolerance = kHardSlack;
  rep.vacuous = (terms.lhs_raw == 0.0 && terms.rhs_raw == 0.0);
  rep.holds = rep.lhs <= rep.rhs + kHardSlack;
  rep.cases_checked = 1;
  return rep;
}

double outdegree_case_witness(const Distribution& ell, int m_ref) {
  const GridShape& shape = ell.shape();
  const double beta = tv_to_uniform(ell);
  if (beta <= 0.0) return 0.0;
  const OrientedEdgeSet G = graphs::build_orientation(ell, m_ref);
  const double m = static_cast<double>(G.m_ref());
  const double logn = log_factor(shape.n());

  double e_uneven = 0.0;
  std::map<int, double> e_scale;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    const double mass = ell.mass_at_index(idx);
    if (mass <= 0.0) continue;
    e_uneven += mass * std::sqrt(static_cast<double>(G.outdeg_uneven(idx)));
    for (int kappa : G.scales()) {
      e_scale[kappa] += mass * std::sqrt(static_cast<double>(G.outdeg_scale(kappa, idx)));
    }
  }
  double witness = e_uneven * std::pow(m, 3.0) * logn * logn / beta;
  const double logratio = std::log((static_cast<double>(shape.n()) + 2.0) * m / beta);
  for (const auto& [kappa, val] : e_scale) {
    const double w =
        val * std::pow(m, 3.5) * logn * logn * logratio / (std::pow(m, kappa) * beta);
    witness = std::max(witness, w);
  }
  return witness;
}

VerificationReport check_outdegree_case_witness(const Distribution& ell, double c_emp,
                                                int m_ref) {
  VerificationReport rep = base_report("outdegree_case_witness", ell);
  const double beta = tv_to_uniform(ell);
  if (beta <= 0.0) {
    rep.vacuous = true;
    rep.holds = true;
    return rep;
  }
  const double witness = outdegree_case_witness(ell, m_ref);
  rep.lhs = 1.0 / c_emp;
  rep.rhs = witness;
  rep.ratio = VerificationReport::safe_ratio(rep.lhs, rep.rhs);
  rep.tolerance = kHardSlack;
  rep.holds = witness + kHardSlack >= 1.0 / c_emp;
  rep.cases_checked = 1;
  return rep;
}

double subcube_coordinate_mass(const Distribution& p, const std::vector<int>& stars,
                               const Point& y, int coord, Symbol v) {
  const GridShape& shape = p.shape();
  std::vector<bool> is_star(static_cast<std::size_t>(shape.n()), false);
  for (int s : stars) is_star[static_cast<std::size_t>(s)] = true;
  double acc = 0.0;
  Point x;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, x);
    if (x[static_cast<std::size_t>(coord)] != v) continue;
    bool match = true;
    for (int j = 0; j < shape.n() && match; ++j) {
      if (!is_star[static_cast<std::size_t>(j)] &&
          x[static_cast<std::size_t>(j)] != y[static_cast<std::size_t>(j)]) {
        match = false;
      }
    }
    if (match) acc += p.mass_at_index(idx);
  }
  return acc;
}

double partial_bias_sq(const Distribution& p, const std::vector<int>& stars, const Point& y,
                       const std::vector<int>& coords) {
  const GridShape& shape = p.shape();
  std::vector<bool> is_star(static_cast<std::size_t>(shape.n()), false);
  for (int s : stars) is_star[static_cast<std::size_t>(s)] = true;

  // One pass: per-coordinate symbol masses within the subcube.
  std::map<int, std::vector<double>> masses;
  for (int c : coords) {
    masses[c].assign(static_cast<std::size_t>(shape.side(c)), 0.0);
  }
  Point x;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, x);
    bool match = true;
    for (int j = 0; j < shape.n() && match; ++j) {
      if (!is_star[static_cast<std::size_t>(j)] &&
          x[static_cast<std::size_t>(j)] != y[static_cast<std::size_t>(j)]) {
        match = false;
      }
    }
    if (!match) continue;
    const double mass = p.mass_at_index(idx);
    for (auto& [c, vec] : masses) {
      vec[static_cast<std::size_t>(x[static_cast<std::size_t>(c)])] += mass;
    }
  }
  double sq = 0.0;
  for (const auto& [c, vec] : masses) {
    for (std::size_t a = 0; a < vec.size(); ++a) {
      for (std::size_t b = 0; b < vec.size(); ++b) {
        if (a == b) continue;
        const double denom = vec[a] + vec[b];
        if (denom <= 0.0) continue;
        const double mu = (vec[a] - vec[b]) / denom;
        sq += mu * mu;
      }
    }
  }
  return sq;
}

namespace {

/// Orientation of the projection onto the complement of the t-subset T,
/// cached per T. Thresholds use the global m of p's shape.
class ProjectionGraphCache {
 public:
  explicit ProjectionGraphCache(const Distribution& p) : p_(p), m_(p.shape().max_side()) {}

  struct Entry {
    std::vector<int> complement;       // sorted coords of the subgrid
    std::vector<int> local_of_global;  // global coord -> local index or -1
    Distribution marginal;
    OrientedEdgeSet graph;
  };

  const Entry& get(const std::vector<int>& T) {
    auto it = cache_.find(T);
    if (it != cache_.end()) return it->second;
    Entry e{complement_of(T, p_.shape().n()),
            std::vector<int>(static_cast<std::size_t>(p_.shape().n()), -1),
            project(p_, complement_of(T, p_.shape().n())), OrientedEdgeSet{}};
    for (std::size_t j = 0; j < e.complement.size(); ++j) {
      e.local_of_global[static_cast<std::size_t>(e.complement[j])] = static_cast<int>(j);
    }
    e.marginal = e.marginal.is_dense() ? e.marginal : e.marginal.to_dense();
    e.graph = graphs::build_orientation(e.marginal, m_);
    return cache_.emplace(T, std::move(e)).first->second;
  }

  int m() const { return m_; }

 private:
  const Distribution& p_;
  int m_;
  std::map<std::vector<int>, Entry> cache_;
};

void require_desk_scale(const Distribution& p, int t, const char* what) {
  const GridShape& shape = p.shape();
  if (!p.is_dense()) throw ArgumentError(std::string(what) + ": dense distribution required");
  if (t < 1 || t >= shape.n()) {
    throw ArgumentError(std::string(what) + ": need 1 <= t <= n-1");
  }
  if (shape.n() > 6 || shape.total_size() > 1000) {
    throw CapacityError(std::string(what) + ": enumeration needs n <= 6 and <= 1000 cells");
  }
}

/// Projection of y onto the subgrid coordinates, as a subgrid point index.
std::int64_t project_point(const GridShape& sub, const std::vector<int>& coords, const Point& y) {
  Point z(coords.size());
  for (std::size_t j = 0; j < coords.size(); ++j) {
    z[j] = y[static_cast<std::size_t>(coords[j])];
  }
  return sub.index_of(z);
}

}  // namespace

VerificationReport check_restriction_bias_edge_bound(const Distribution& p, int t) {
  require_desk_scale(p, t, "check_restriction_bias_edge_bound");
  VerificationReport rep = base_report("restriction_bias_edge_bound", p);
  rep.instance += " t=" + std::to_string(t);
  const GridShape& shape = p.shape();
  const int n = shape.n();
  ProjectionGraphCache cache(p);
  const double m = static_cast<double>(cache.m());
  bool ok = true;

  Point y;
  for (const auto& S : enumerate_subsets_of_size(n, t + 1)) {
    for (int s : S) {
      std::vector<int> T;
      for (int v : S) {
        if (v != s) T.push_back(v);
      }
      const auto& entry = cache.get(T);
      const int local_s = entry.local_of_global[static_cast<std::size_t>(s)];
      for (std::int64_t yidx = 0; yidx < shape.total_size(); ++yidx) {
        if (p.mass_at_index(yidx) <= 0.0) continue;  // y must be in the support
        shape.decode_into(yidx, y);
        const Symbol c = y[static_cast<std::size_t>(s)];
        const std::int64_t z = project_point(entry.graph.shape(), entry.complement, y);
        const double pr_c = subcube_coordinate_mass(p, S, y, s, c);
        for (Symbol b = 0; b < shape.side(s); ++b) {
          double rhs = 0.0;
          if (b != c) {
            if (entry.graph.in_subgraph(SubgraphId::Uneven, 0, z, local_s, b)) {
              rhs = m / (2.0 * (m + 1.0));
            } else {
              for (int kappa : entry.graph.scales()) {
                if (entry.graph.in_subgraph(SubgraphId::Scale, kappa, z, local_s, b)) {
                  rhs = 1.0 / (2.0 * std::pow(m, kappa));
                  break;
                }
              }
            }
          }
          ++rep.cases_checked;
          if (rhs == 0.0) continue;
          ++rep.premise_cases;
          const double pr_b = subcube_coordinate_mass(p, S, y, s, b);
          const double denom = pr_b + pr_c;
          const double lhs = (denom <= 0.0) ? 0.0 : std::abs((pr_b - pr_c) / denom);
          if (lhs + kHardSlack < rhs) {
            ok = false;
            rep.lhs = lhs;
            rep.rhs = rhs;
          }
        }
      }
    }
  }
  rep.tolerance = kHardSlack;
  rep.vacuous = (rep.premise_cases == 0);
  rep.holds = ok;
  return rep;
}

VerificationReport check_double_uneven_bias_witness(const Distribution& p, int t) {
  require_desk_scale(p, t, "check_double_uneven_bias_witness");
  VerificationReport rep = base_report("double_uneven_bias_witness", p);
  rep.instance += " t=" + std::to_string(t);
  const GridShape& shape = p.shape();
  const int n = shape.n();
  ProjectionGraphCache cache(p);
  const double m = static_cast<double>(cache.m());
  const double bound = 1.0 / (4.0 * m);
  bool ok = true;

  Point y;
  for (const auto& S : enumerate_subsets_of_size(n, t + 1)) {
    for (std::size_t ii = 0; ii < S.size(); ++ii) {
      for (std::size_t jj = ii + 1; jj < S.size(); ++jj) {
        const int si = S[ii], sj = S[jj];
        std::vector<int> Ti, Tj;
        for (int v : S) {
          if (v != si) Ti.push_back(v);
          if (v != sj) Tj.push_back(v);
        }
        const auto& ei = cache.get(Ti);  // graph for stars-at-Ti (edge along si)
        const auto& ej = cache.get(Tj);
        const int local_i = ei.local_of_global[static_cast<std::size_t>(si)];
        const int local_j = ej.local_of_global[static_cast<std::size_t>(sj)];
        for (std::int64_t yidx = 0; yidx < shape.total_size(); ++yidx) {
          if (p.mass_at_index(yidx) <= 0.0) continue;
          shape.decode_into(yidx, y);
          const std::int64_t zi = project_point(ei.graph.shape(), ei.complement, y);
          const std::int64_t zj = project_point(ej.graph.shape(), ej.complement, y);
          // Directed uneven edges along both coordinates?
          bool has_i = false, has_j = false;
          for (Symbol bi = 0; bi < shape.side(si) && !has_i; ++bi) {
            if (bi != y[static_cast<std::size_t>(si)] &&
                ei.graph.in_subgraph(SubgraphId::Uneven, 0, zi, local_i, bi)) {
              has_i = true;
            }
          }
          for (Symbol bj = 0; bj < shape.side(sj) && !has_j; ++bj) {
            if (bj != y[static_cast<std::size_t>(sj)] &&
                ej.graph.in_subgraph(SubgraphId::Uneven, 0, zj, local_j, bj)) {
              has_j = true;
            }
          }
          ++rep.cases_checked;
          if (!has_i || !has_j) continue;
          ++rep.premise_cases;
          // Witness: some c_i under stars Tj, or some c_j under stars Ti.
          bool found = false;
          const Symbol yi = y[static_cast<std::size_t>(si)];
          const double pr_yi = subcube_coordinate_mass(p, Tj, y, si, yi);
          for (Symbol ci = 0; ci < shape.side(si) && !found; ++ci) {
            const double pr_ci = subcube_coordinate_mass(p, Tj, y, si, ci);
            const double denom = pr_ci + pr_yi;
            if (denom <= 0.0) continue;
            if (std::abs((pr_ci - pr_yi) / denom) + kHardSlack >= bound) found = true;
          }
          const Symbol yj = y[static_cast<std::size_t>(sj)];
          const double pr_yj = subcube_coordinate_mass(p, Ti, y, sj, yj);
          for (Symbol cj = 0; cj < shape.side(sj) && !found; ++cj) {
            const double pr_cj = subcube_coordinate_mass(p, Ti, y, sj, cj);
            const double denom = pr_cj + pr_yj;
            if (denom <= 0.0) continue;
            if (std::abs((pr_cj - pr_yj) / denom) + kHardSlack >= bound) found = true;
          }
          if (!found) ok = false;
        }
      }
    }
  }
  rep.tolerance = kHardSlack;
  rep.vacuous = (rep.premise_cases == 0);
  rep.holds = ok;
  return rep;
}

VerificationReport check_bias_mixture_contraction(const Distribution& p, int t, int kappa,
                                                  double gamma) {
  require_desk_scale(p, t, "check_bias_mixture_contraction");
  if (kappa < 1 || !(gamma >= 1.0)) {
    throw ArgumentError("check_bias_mixture_contraction: need kappa >= 1, gamma >= 1");
  }
  VerificationReport rep = base_report("bias_mixture_contraction", p);
  rep.instance += " t=" + std::to_string(t) + " kappa=" + std::to_string(kappa) +
                  " gamma=" + std::to_string(gamma);
  const GridShape& shape = p.shape();
  const int n = shape.n();
  const double m = static_cast<double>(shape.max_side());
  const double bound = gamma / std::pow(m, 2.0 * kappa + 2.0);
  bool ok = true;

  Point y;
  for (const auto& S : enumerate_subsets_of_size(n, t + 1)) {
    for (int s : S) {
      std::vector<int> T;
      for (int v : S) {
        if (v != s) T.push_back(v);
      }
      for (std::int64_t yidx = 0; yidx < shape.total_size(); ++yidx) {
        if (p.mass_at_index(yidx) <= 0.0) continue;
        shape.decode_into(yidx, y);
        ++rep.cases_checked;
        // Premise: every fiber (coordinate s pinned to a) is below the bound.
        bool premise = true;
        for (Symbol a = 0; a < shape.side(s) && premise; ++a) {
          const Point ya = with_coordinate(y, s, a);
          if (partial_bias_sq(p, T, ya, T) >= bound) premise = false;
        }
        if (!premise) continue;
        ++rep.premise_cases;
        const double conclusion = partial_bias_sq(p, S, y, T);
        if (conclusion > bound + kHardSlack) {
          ok = false;
          rep.lhs = conclusion;
          rep.rhs = bound;
        }
      }
    }
  }
  rep.tolerance = kHardSlack;
  rep.vacuous = (rep.premise_cases == 0);
  rep.holds = ok;
  return rep;
}

namespace {

/// E_{rho ~ D(t,p)}[||mu(p_|rho)||_2], enumerated exactly: average over all
/// t-subsets T (stars) and all positive-mass assignments of the complement.
double bias_norm_expectation(const Distribution& p, int t) {
  const GridShape& shape = p.shape();
  const int n = shape.n();
  if (t < 1 || t > n) throw ArgumentError("bias_norm_expectation: t out of range");
  const auto subsets = enumerate_subsets_of_size(n, t);
  double acc = 0.0;
  Point y;
  for (const auto& T : subsets) {
    if (static_cast<int>(T.size()) == n) {
      // All-star restriction: the conditional is p itself.
      acc += bias_norm(p);
      continue;
    }
    const std::vector<int> fixed = complement_of(T, n);
    const GridShape fix_shape = shape.sub_shape(fixed);
    std::vector<double> group_mass(static_cast<std::size_t>(fix_shape.total_size()), 0.0);
    Point fp(fixed.size());
    for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
      shape.decode_into(idx, y);
      for (std::size_t j = 0; j < fixed.size(); ++j) {
        fp[j] = y[static_cast<std::size_t>(fixed[j])];
      }
      group_mass[static_cast<std::size_t>(fix_shape.index_of(fp))] += p.mass_at_index(idx);
    }
    double per_subset = 0.0;
    Point full(static_cast<std::size_t>(n), 0);
    for (std::int64_t g = 0; g < fix_shape.total_size(); ++g) {
      const double mass = group_mass[static_cast<std::size_t>(g)];
      if (mass <= 0.0) continue;  // zero-mass subcube: zero weight
      fix_shape.decode_into(g, fp);
      for (std::size_t j = 0; j < fixed.size(); ++j) {
        full[static_cast<std::size_t>(fixed[j])] = fp[j];
      }
      per_subset += mass * std::sqrt(partial_bias_sq(p, T, full, T));
    }
    acc += per_subset;
  }
  return acc / static_cast<double>(subsets.size());
}

}  // namespace

RestrictionBiasTerms restriction_bias_expectation_terms(const Distribution& p, int t) {
  require_desk_scale(p, t, "restriction_bias_expectation_terms");
  const GridShape& shape = p.shape();
  const int n = shape.n();
  RestrictionBiasTerms terms;
  terms.bias_expectation = bias_norm_expectation(p, t) + bias_norm_expectation(p, t + 1);
  const auto subsets = enumerate_subsets_of_size(n, t);
  for (const auto& T : subsets) {
    terms.alpha += tv_to_uniform(project(p, complement_of(T, n)));
  }
  terms.alpha /= static_cast<double>(subsets.size());
  if (terms.alpha > 0.0) {
    const double m = static_cast<double>(shape.max_side());
    const double la = std::log((static_cast<double>(n) + 2.0) * m / terms.alpha);
    const double li = std::max(1.0, std::log(1.0 / terms.alpha));
    terms.scaled_rhs = (static_cast<double>(t) / n) * terms.alpha /
                       (std::pow(m, 7.5) * la * la * li);
  }
  return terms;
}

VerificationReport check_projection_bias_lower_bound(const Distribution& p) {
  VerificationReport rep = base_report("projection_bias_lower_bound", p);
  const GridShape& shape = p.shape();
  const int m = shape.max_side();
  // Marginal band of the coarse stage; instances outside it are vacuous.
  for (int i = 0; i < shape.n(); ++i) {
    for (Symbol a = 0; a < shape.side(i); ++a) {
      const double q = p.coordinate_marginal(i, a);
      const double mi = static_cast<double>(shape.side(i));
      if (q < 1.0 / (4.0 * mi) || q > 4.0 / mi) {
        rep.vacuous = true;
        rep.holds = true;
        return rep;
      }
    }
  }
  double lhs = 0.0;
  for (int k = 1; k <= m * m; ++k) {
    const double norm = bias_norm(hypercube_projection(p, k));
    lhs += norm * norm;
  }
  const double full = bias_norm(p);
  const double rhs = full * full / (4.0 * static_cast<double>(m) * m);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.ratio = VerificationReport::safe_ratio(lhs, rhs);
  rep.tolerance = 1e-9;
  rep.holds = lhs >= rhs - 1e-9;
  rep.cases_checked = m * m;
  return rep;
}

}  // namespace hgut::verify
