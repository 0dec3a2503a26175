#include "hgut/edge_graphs.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hgut/errors.hpp"

namespace hgut::graphs {

namespace {

constexpr std::int64_t kOrientationCap = 10'000;
constexpr double kZeroRelTol = 1e-12;

int classify_scale(double w, double m, int cap) {
  // kappa with m^-kappa < w <= m^-(kappa-1), clamped to [1, cap].
  int kappa = static_cast<int>(std::floor(-std::log(w) / std::log(m))) + 1;
  if (kappa < 1) kappa = 1;
  while (kappa > 1 && w > std::pow(m, -(kappa - 1))) --kappa;
  while (w <= std::pow(m, -kappa)) ++kappa;
  return std::min(kappa, cap);
}

}  // namespace

int scale_cap(const GridShape& shape, int m_ref) {
  const double m = static_cast<double>(m_ref);
  const double cells = static_cast<double>(shape.total_size());
  return static_cast<int>(std::ceil(10.0 * std::log(cells * 1e6) / std::log(m)));
}

std::vector<std::pair<UndirectedEdge, EdgeClass>> classify_edges(const Distribution& ell,
                                                                 int m_ref) {
  if (!ell.is_dense()) throw ArgumentError("classify_edges: dense distribution required");
  const GridShape& shape = ell.shape();
  if (shape.total_size() > kOrientationCap) {
    throw CapacityError("classify_edges: total_size exceeds cap");
  }
  const int m = (m_ref > 0) ? m_ref : shape.max_side();
  const double uneven_threshold = static_cast<double>(m) / (m + 1.0);
  const int cap = scale_cap(shape, m);

  std::vector<std::pair<UndirectedEdge, EdgeClass>> out;
  Point x;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, x);
    const double px = ell.mass_at_index(idx);
    for (int i = 0; i < shape.n(); ++i) {
      for (Symbol b = x[static_cast<std::size_t>(i)] + 1; b < shape.side(i); ++b) {
        const double py = ell.mass_at(with_coordinate(x, i, b));
        EdgeClass cls;
        const double hi = std::max(px, py);
        const double diff = std::abs(px - py);
        if (hi <= 0.0 || diff <= kZeroRelTol * hi) {
          cls.tag = EdgeTag::Zero;
        } else {
          cls.weight = diff / hi;
          if (cls.weight >= uneven_threshold) {
            cls.tag = EdgeTag::Uneven;
          } else {
            cls.tag = EdgeTag::Even;
            cls.scale = classify_scale(cls.weight, static_cast<double>(m), cap);
          }
        }
        out.push_back({UndirectedEdge{idx, i, b}, cls});
      }
    }
  }
  return out;
}

std::uint64_t OrientedEdgeSet::key(std::int64_t x, int coord, Symbol b) const {
  return (static_cast<std::uint64_t>(x) * 64 + static_cast<std::uint64_t>(coord)) * 64 +
         static_cast<std::uint64_t>(b);
}

const OrientedEdgeSet::Info* OrientedEdgeSet::find(std::int64_t x, int coord, Symbol b) const {
  auto it = info_.find(key(x, coord, b));
  return (it == info_.end()) ? nullptr : &it->second;
}

EdgeClass OrientedEdgeSet::edge_class(std::int64_t x, int coord, Symbol b) const {
  const Info* info = find(x, coord, b);
  if (!info) throw ArgumentError("edge_class: not an edge of H");
  return info->cls;
}

bool OrientedEdgeSet::oriented_out(std::int64_t x, int coord, Symbol b) const {
  const Info* info = find(x, coord, b);
  return info && info->out;
}

SubgraphId OrientedEdgeSet::subgraph_of(std::int64_t x, int coord, Symbol b) const {
  const Info* info = find(x, coord, b);
  if (!info) throw ArgumentError("subgraph_of: not an edge of H");
  switch (info->cls.tag) {
    case EdgeTag::Zero:
      return SubgraphId::Zero;
    case EdgeTag::Uneven:
      return SubgraphId::Uneven;
    case EdgeTag::Even:
      return info->in_scale ? SubgraphId::Scale : SubgraphId::Remaining;
  }
  return SubgraphId::Zero;
}

bool OrientedEdgeSet::in_subgraph(SubgraphId g, int kappa, std::int64_t x, int coord,
                                  Symbol b) const {
  const Info* info = find(x, coord, b);
  if (!info || !info->out) return false;
  if (subgraph_of(x, coord, b) != g) return false;
  if (g == SubgraphId::Scale && info->cls.scale != kappa) return false;
  return true;
}

const std::vector<std::int64_t>& OrientedEdgeSet::peel_rank(int kappa) const {
  auto it = peel_rank_.find(kappa);
  if (it == peel_rank_.end()) throw ArgumentError("peel_rank: no such scale");
  return it->second;
}

std::vector<int> OrientedEdgeSet::scales() const {
  std::vector<int> out;
  for (const auto& [k, _] : scale_) out.push_back(k);
  return out;
}

int OrientedEdgeSet::outdeg_uneven(std::int64_t x) const {
  return outdeg_uneven_[static_cast<std::size_t>(x)];
}

int OrientedEdgeSet::outdeg_uneven_along(std::int64_t x, int coord) const {
  auto it = outdeg_uneven_dir_.find(key(x, coord, 0));
  return (it == outdeg_uneven_dir_.end()) ? 0 : it->second;
}

int OrientedEdgeSet::outdeg_scale(int kappa, std::int64_t x) const {
  auto it = outdeg_scale_.find(kappa);
  if (it == outdeg_scale_.end()) return 0;
  return it->second[static_cast<std::size_t>(x)];
}

int OrientedEdgeSet::outdeg_zero(std::int64_t x) const {
  return outdeg_zero_[static_cast<std::size_t>(x)];
}

int OrientedEdgeSet::outdeg_remaining(std::int64_t x) const {
  return outdeg_remaining_[static_cast<std::size_t>(x)];
}

int OrientedEdgeSet::outdeg_gprime(std::int64_t x) const {
  int d = outdeg_uneven(x) + outdeg_remaining(x);
  for (const auto& [k, v] : outdeg_scale_) d += v[static_cast<std::size_t>(x)];
  return d;
}

int OrientedEdgeSet::outdeg_total(std::int64_t x) const {
  return outdeg_gprime(x) + outdeg_zero(x);
}

std::vector<std::pair<int, Symbol>> OrientedEdgeSet::outgoing(std::int64_t x) const {
  std::vector<std::pair<int, Symbol>> out;
  for (int i = 0; i < shape_.n(); ++i) {
    Point p = shape_.point_at(x);
    for (Symbol b = 0; b < shape_.side(i); ++b) {
      if (b == p[static_cast<std::size_t>(i)]) continue;
      if (oriented_out(x, i, b)) out.push_back({i, b});
    }
  }
  return out;
}

void OrientedEdgeSet::index_edges() {
  const std::int64_t size = shape_.total_size();
  outdeg_uneven_.assign(static_cast<std::size_t>(size), 0);
  outdeg_zero_.assign(static_cast<std::size_t>(size), 0);
  outdeg_remaining_.assign(static_cast<std::size_t>(size), 0);
  outdeg_uneven_dir_.clear();
  outdeg_scale_.clear();
  for (const auto& e : uneven_) {
    ++outdeg_uneven_[static_cast<std::size_t>(e.src)];
    ++outdeg_uneven_dir_[key(e.src, e.coord, 0)];
  }
  for (const auto& e : zero_) ++outdeg_zero_[static_cast<std::size_t>(e.src)];
  for (const auto& e : remaining_) ++outdeg_remaining_[static_cast<std::size_t>(e.src)];
  for (const auto& [k, edges] : scale_) {
    auto& deg = outdeg_scale_[k];
    deg.assign(static_cast<std::size_t>(size), 0);
    for (const auto& e : edges) ++deg[static_cast<std::size_t>(e.src)];
  }
}

OrientedEdgeSet build_orientation(const Distribution& ell, int m_ref) {
  if (!ell.is_dense()) throw ArgumentError("build_orientation: dense distribution required");
  const GridShape& shape = ell.shape();
  if (shape.total_size() > kOrientationCap) {
    throw CapacityError("build_orientation: total_size exceeds cap");
  }
  if (shape.n() >= 64 || shape.max_side() >= 64) {
    throw CapacityError("build_orientation: dimensions out of key range");
  }

  OrientedEdgeSet G;
  G.shape_ = shape;
  G.m_ref_ = (m_ref > 0) ? m_ref : shape.max_side();
  G.num_undirected_ = 0;

  const auto classified = classify_edges(ell, G.m_ref_);

  // Record class info on both directions of every edge.
  Point px;
  for (const auto& [e, cls] : classified) {
    shape.decode_into(e.x, px);
    const Symbol a = px[static_cast<std::size_t>(e.coord)];
    const std::int64_t y = shape.index_of(with_coordinate(px, e.coord, e.b));
    OrientedEdgeSet::Info info;
    info.cls = cls;
    G.info_[G.key(e.x, e.coord, e.b)] = info;
    G.info_[G.key(y, e.coord, a)] = info;
    ++G.num_undirected_;
  }

  auto orient = [&](std::int64_t from, int coord, Symbol to_sym, std::int64_t to_idx,
                    Symbol from_sym, bool in_scale_graph)
      -> DirectedEdge {
    auto& fwd = G.info_.at(G.key(from, coord, to_sym));
    auto& bwd = G.info_.at(G.key(to_idx, coord, from_sym));
    fwd.out = true;
    fwd.in_scale = in_scale_graph;
    bwd.in_scale = in_scale_graph;
    return DirectedEdge{from, coord, to_sym};
  };

  // Pass 1: uneven edges, higher mass -> lower mass.
  struct PendingEven {
    std::int64_t x, y;
    int coord;
    Symbol bx, by;  // symbol at coord for x resp. y
    int scale;
  };
  std::vector<PendingEven> even_edges;
  for (const auto& [e, cls] : classified) {
    shape.decode_into(e.x, px);
    const Symbol a = px[static_cast<std::size_t>(e.coord)];
    const std::int64_t y = shape.index_of(with_coordinate(px, e.coord, e.b));
    switch (cls.tag) {
      case EdgeTag::Uneven: {
        const bool x_higher = ell.mass_at_index(e.x) > ell.mass_at_index(y);
        if (x_higher) {
          G.uneven_.push_back(orient(e.x, e.coord, e.b, y, a, false));
        } else {
          G.uneven_.push_back(orient(y, e.coord, a, e.x, e.b, false));
        }
        break;
      }
      case EdgeTag::Zero: {
        // Arbitrary by construction; lexicographically smaller index is the
        // source, for reproducibility.
        G.zero_.push_back(orient(e.x, e.coord, e.b, y, a, false));
        break;
      }
      case EdgeTag::Even:
        even_edges.push_back({e.x, y, e.coord, a, e.b, cls.scale});
        break;
    }
  }
  G.index_edges();  // makes outdeg_uneven_along available for the even pass

  // Pass 2: split even edges into scale graphs H^[kappa] and the remainder.
  std::map<int, std::vector<PendingEven>> by_scale;
  for (const auto& e : even_edges) {
    const bool x_has = G.outdeg_uneven_along(e.x, e.coord) > 0;
    const bool y_has = G.outdeg_uneven_along(e.y, e.coord) > 0;
    if (!x_has && !y_has) {
      by_scale[e.scale].push_back(e);
    } else if (x_has && (!y_has || e.x < e.y)) {
      G.remaining_.push_back(orient(e.x, e.coord, e.by, e.y, e.bx, false));
    } else {
      G.remaining_.push_back(orient(e.y, e.coord, e.bx, e.x, e.by, false));
    }
  }

  // Pass 3: peel order per scale, then orient by rank.
  const std::int64_t size = shape.total_size();
  for (auto& [kappa, edges] : by_scale) {
    std::vector<std::vector<std::int64_t>> adj(static_cast<std::size_t>(size));
    for (const auto& e : edges) {
      adj[static_cast<std::size_t>(e.x)].push_back(e.y);
      adj[static_cast<std::size_t>(e.y)].push_back(e.x);
    }
    std::vector<int> deg(static_cast<std::size_t>(size));
    int max_deg = 0;
    for (std::int64_t v = 0; v < size; ++v) {
      deg[static_cast<std::size_t>(v)] = static_cast<int>(adj[static_cast<std::size_t>(v)].size());
      max_deg = std::max(max_deg, deg[static_cast<std::size_t>(v)]);
    }
    std::vector<std::set<std::int64_t>> bucket(static_cast<std::size_t>(max_deg) + 1);
    for (std::int64_t v = 0; v < size; ++v) bucket[static_cast<std::size_t>(deg[static_cast<std::size_t>(v)])].insert(v);

    std::vector<std::int64_t> rank(static_cast<std::size_t>(size), -1);
    std::vector<bool> removed(static_cast<std::size_t>(size), false);
    int cur = max_deg;
    for (std::int64_t step = 0; step < size; ++step) {
      // Largest remaining degree; ties broken toward the smaller point index.
      while (cur > 0 && bucket[static_cast<std::size_t>(cur)].empty()) --cur;
      const std::int64_t v = *bucket[static_cast<std::size_t>(cur)].begin();
      bucket[static_cast<std::size_t>(cur)].erase(bucket[static_cast<std::size_t>(cur)].begin());
      removed[static_cast<std::size_t>(v)] = true;
      rank[static_cast<std::size_t>(v)] = step;
      for (std::int64_t w : adj[static_cast<std::size_t>(v)]) {
        if (removed[static_cast<std::size_t>(w)]) continue;
        auto& d = deg[static_cast<std::size_t>(w)];
        bucket[static_cast<std::size_t>(d)].erase(w);
        --d;
        bucket[static_cast<std::size_t>(d)].insert(w);
        if (d > cur) cur = d;
      }
    }
    G.peel_rank_[kappa] = rank;

    auto& oriented = G.scale_[kappa];
    for (const auto& e : edges) {
      if (rank[static_cast<std::size_t>(e.x)] < rank[static_cast<std::size_t>(e.y)]) {
        oriented.push_back(orient(e.x, e.coord, e.by, e.y, e.bx, true));
      } else {
        oriented.push_back(orient(e.y, e.coord, e.bx, e.x, e.by, true));
      }
    }
  }

  G.index_edges();
  return G;
}

int outdegree(const Point& x, SubgraphId g, int kappa, const OrientedEdgeSet& E) {
  const std::int64_t idx = E.shape().index_of(x);
  switch (g) {
    case SubgraphId::Zero:
      return E.outdeg_zero(idx);
    case SubgraphId::Uneven:
      return E.outdeg_uneven(idx);
    case SubgraphId::Scale:
      return E.outdeg_scale(kappa, idx);
    case SubgraphId::Remaining:
      return E.outdeg_remaining(idx);
  }
  return 0;
}

OrientedEdgeSet corrupt_orientation_for_testing(const OrientedEdgeSet& g) {
  OrientedEdgeSet out = g;
  auto flip = [&out](std::vector<DirectedEdge>& edges) -> bool {
    if (edges.empty()) return false;
    DirectedEdge e = edges.front();
    Point p = out.shape_.point_at(e.src);
    const Symbol from_sym = p[static_cast<std::size_t>(e.coord)];
    const std::int64_t dst = out.shape_.index_of(with_coordinate(p, e.coord, e.dest));
    out.info_.at(out.key(e.src, e.coord, e.dest)).out = false;
    out.info_.at(out.key(dst, e.coord, from_sym)).out = true;
    edges.front() = DirectedEdge{dst, e.coord, from_sym};
    return true;
  };
  if (!flip(out.uneven_)) {
    bool done = false;
    for (auto& [k, edges] : out.scale_) {
      if (flip(edges)) {
        done = true;
        break;
      }
    }
    if (!done && !flip(out.remaining_)) flip(out.zero_);
  }
  out.index_edges();
  return out;
}

std::string OrientedEdgeSet::to_dot() const {
  std::ostringstream os;
  os << "digraph G {\n";
  auto dump = [&](const std::vector<DirectedEdge>& edges, const char* color,
                  const std::string& label) {
    for (const auto& e : edges) {
      Point p = shape_.point_at(e.src);
      Point q = with_coordinate(p, e.coord, e.dest);
      os << "  \"" << e.src << "\" -> \"" << shape_.index_of(q) << "\" [color=" << color
         << ", label=\"" << label << "\"];\n";
    }
  };
  dump(uneven_, "red", "u");
  dump(zero_, "gray", "z");
  dump(remaining_, "orange", "r");
  for (const auto& [k, edges] : scale_) dump(edges, "blue", "k" + std::to_string(k));
  os << "}\n";
  return os.str();
}

}  // namespace hgut::graphs
