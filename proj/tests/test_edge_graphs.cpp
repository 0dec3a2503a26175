#include <cmath>
#include <doctest.h>

#include "hgut/distribution.hpp"
#include "hgut/edge_graphs.hpp"
#include "hgut/errors.hpp"
#include "hgut/rng.hpp"
#include "hgut/verify.hpp"

using namespace hgut;
using graphs::EdgeTag;
using graphs::OrientedEdgeSet;
using graphs::SubgraphId;

namespace {

Distribution point_mass(const GridShape& shape, std::int64_t atom) {
  std::vector<double> t(static_cast<std::size_t>(shape.total_size()), 0.0);
  t[static_cast<std::size_t>(atom)] = 1.0;
  return Distribution::dense(shape, std::move(t));
}

Distribution random_dirichlet(const GridShape& shape, double alpha, Rng& rng) {
  return Distribution::dense(shape,
                             rng.dirichlet(alpha, static_cast<std::size_t>(shape.total_size())));
}

}  // namespace

TEST_CASE("edge classification") {
  SUBCASE("uniform has only zero edges") {
    const auto classes = graphs::classify_edges(Distribution::uniform(GridShape({3, 2})).to_dense());
    // N * sum_i (m_i - 1) / 2 = 6 * 3 / 2.
    CHECK(classes.size() == 9);
    for (const auto& [e, cls] : classes) CHECK(cls.tag == EdgeTag::Zero);
  }
  SUBCASE("direct weight brackets") {
    // Masses 0.8 / 0.2 on a binary coordinate: w = 0.6/0.8 = 0.75 >= 2/3.
    const Distribution p = Distribution::dense(GridShape({2}), {0.8, 0.2});
    const auto classes = graphs::classify_edges(p);
    REQUIRE(classes.size() == 1);
    CHECK(classes[0].second.tag == EdgeTag::Uneven);
    CHECK(classes[0].second.weight == doctest::Approx(0.75));
    // Masses 0.5 / 0.4 with m = 3: w = 0.2 lies in (1/9, 1/3] so scale 2.
    const Distribution q = Distribution::dense(GridShape({3}), {0.5, 0.4, 0.1});
    for (const auto& [e, cls] : graphs::classify_edges(q)) {
      if (e.x == 0 && e.b == 1) {
        CHECK(cls.tag == EdgeTag::Even);
        CHECK(cls.scale == 2);
        CHECK(cls.weight == doctest::Approx(0.2));
      }
    }
  }
  SUBCASE("near-equal masses are zero edges") {
    const double eps = 1e-14;
    const Distribution p = Distribution::dense(GridShape({2}), {0.5 + eps, 0.5 - eps});
    CHECK(graphs::classify_edges(p)[0].second.tag == EdgeTag::Zero);
  }
  SUBCASE("tiny weights land in the final scale bucket") {
    const GridShape shape({2});
    const int cap = graphs::scale_cap(shape, 2);
    // Weight ~1e-9 is far below m^-cap? No: cap ~ 10*log2(2e6) ~ 210, so a
    // 1e-9 weight keeps its own scale; one below 2^-cap gets clamped.
    const Distribution p = Distribution::dense(shape, {0.5 + 2.5e-10, 0.5 - 2.5e-10});
    const auto cls = graphs::classify_edges(p)[0].second;
    CHECK(cls.tag == EdgeTag::Even);
    CHECK(cls.scale <= cap);
    CHECK(cls.scale >= 30);
    const double w_floor = std::pow(2.0, -(cap + 20));
    const Distribution q =
        Distribution::dense(shape, {0.5 + w_floor, 0.5 - w_floor});
    const auto cls_q = graphs::classify_edges(q)[0].second;
    // Either classed Zero by the relative tolerance or clamped to the cap.
    if (cls_q.tag == EdgeTag::Even) CHECK(cls_q.scale == cap);
  }
}

TEST_CASE("orientation of flat and spiked instances") {
  SUBCASE("uniform puts everything in the zero graph") {
    const auto g = graphs::build_orientation(Distribution::uniform(GridShape({3, 3})).to_dense());
    CHECK(static_cast<std::int64_t>(g.zero_edges().size()) == g.num_undirected_edges());
    CHECK(g.uneven_edges().empty());
    CHECK(g.scale_edges().empty());
    CHECK(g.remaining_edges().empty());
    for (std::int64_t x = 0; x < 9; ++x) CHECK(g.outdeg_uneven(x) == 0);
  }
  SUBCASE("point mass pushes uneven edges away from the atom") {
    const GridShape shape({2, 2});
    const auto g = graphs::build_orientation(point_mass(shape, 0));
    CHECK(g.uneven_edges().size() == 2);
    for (const auto& e : g.uneven_edges()) CHECK(e.src == 0);
    CHECK(g.zero_edges().size() == 2);  // edges among the three zero-mass points
    CHECK(g.outdeg_uneven(0) == 2);
  }
  SUBCASE("atom outdegree counts all incident sides") {
    const GridShape shape({2, 3});
    const auto g = graphs::build_orientation(point_mass(shape, 0));
    CHECK(g.outdeg_uneven(0) == (2 - 1) + (3 - 1));
  }
}

TEST_CASE("handshake: directed edges partition the undirected edge set") {
  Rng rng(211);
  const GridShape shape({3, 3});
  const std::int64_t undirected =
      shape.total_size() * ((3 - 1) + (3 - 1)) / 2;  // N * sum(m_i - 1) / 2
  for (int i = 0; i < 10; ++i) {
    const Distribution p = random_dirichlet(shape, 0.7, rng);
    const auto g = graphs::build_orientation(p);
    CHECK(g.num_undirected_edges() == undirected);
    std::int64_t directed = static_cast<std::int64_t>(g.zero_edges().size()) +
                            static_cast<std::int64_t>(g.uneven_edges().size()) +
                            static_cast<std::int64_t>(g.remaining_edges().size());
    for (const auto& [k, edges] : g.scale_edges()) directed += static_cast<std::int64_t>(edges.size());
    CHECK(directed == undirected);
    std::int64_t outdeg_sum = 0;
    for (std::int64_t x = 0; x < shape.total_size(); ++x) outdeg_sum += g.outdeg_total(x);
    CHECK(outdeg_sum == undirected);
  }
}

TEST_CASE("construction rules audited by independent re-derivation") {
  Rng rng(223);
  for (int i = 0; i < 30; ++i) {
    const Distribution p = random_dirichlet(GridShape({3, 3}), 0.5, rng);
    const auto g = graphs::build_orientation(p);
    CHECK(verify::audit_orientation(p, g).holds);
  }
  // Mixed shapes too.
  for (int i = 0; i < 10; ++i) {
    const Distribution p = random_dirichlet(GridShape({2, 3, 2}), 1.0, rng);
    CHECK(verify::audit_orientation(p, graphs::build_orientation(p)).holds);
  }
}

TEST_CASE("peel order by hand on one five-symbol coordinate") {
  // H over Z_5 is the complete graph on the 5 symbols. With these masses the
  // pairwise weights (|p_a - p_b| / max) land in:
  //   scale 1 (w in (1/5, 5/6)):  {0,2} {0,4} {2,3} {3,4}
  //   scale 2 (w in (1/25, 1/5]): {0,1} {0,3} {1,2} {1,3} {1,4}
  //   scale 3 (w in (1/125, 1/25]): {2,4}
  // In the scale-2 graph the degrees are 2,4,1,2,1, so the peel deletes
  // vertex 1 first, then vertex 0 (degree tie broken toward the smaller
  // index), leaving 2,3,4 in index order.
  const GridShape shape({5});
  const Distribution p = Distribution::dense(shape, {0.24, 0.20, 0.17, 0.225, 0.165});
  const auto g = graphs::build_orientation(p);
  CHECK(g.uneven_edges().empty());
  REQUIRE(g.scale_edges().count(1) == 1);
  REQUIRE(g.scale_edges().count(2) == 1);
  REQUIRE(g.scale_edges().count(3) == 1);
  CHECK(g.scale_edges().at(1).size() == 4);
  CHECK(g.scale_edges().at(2).size() == 5);
  CHECK(g.scale_edges().at(3).size() == 1);
  const auto& rank2 = g.peel_rank(2);
  CHECK(rank2[1] == 0);
  CHECK(rank2[0] == 1);
  CHECK(rank2[2] == 2);
  CHECK(rank2[3] == 3);
  CHECK(rank2[4] == 4);
  // Every scale-2 edge must run from the lower to the higher rank.
  for (const auto& e : g.scale_edges().at(2)) {
    const std::int64_t dst = shape.index_of(with_coordinate(shape.point_at(e.src), e.coord, e.dest));
    CHECK(rank2[static_cast<std::size_t>(e.src)] < rank2[static_cast<std::size_t>(dst)]);
  }
  CHECK(verify::audit_orientation(p, g).holds);
}

TEST_CASE("bounded indegree of the peel orientation") {
  Rng rng(227);
  SUBCASE("empty witness set is trivial") {
    const Distribution p = random_dirichlet(GridShape({3, 3}), 0.5, rng);
    const auto g = graphs::build_orientation(p);
    for (int kappa : g.scales()) {
      CHECK(verify::peel_indegree_bound_holds(g, kappa, {}, 0, 1));
    }
  }
  SUBCASE("random probes never violate the bound") {
    for (int i = 0; i < 10; ++i) {
      const Distribution p = random_dirichlet(GridShape({3, 3}), 0.6, rng);
      CHECK(verify::check_peel_indegree_property(p, rng, 100).holds);
    }
  }
  SUBCASE("a top-ranked target receives nothing") {
    for (int i = 0; i < 20; ++i) {
      const Distribution p = random_dirichlet(GridShape({3, 3}), 0.6, rng);
      const auto g = graphs::build_orientation(p);
      for (int kappa : g.scales()) {
        const auto& rank = g.peel_rank(kappa);
        // v = the first-ranked vertex; U = everything else with outdeg <= g.
        std::int64_t v = 0;
        for (std::int64_t x = 0; x < p.shape().total_size(); ++x) {
          if (rank[static_cast<std::size_t>(x)] == 0) v = x;
        }
        std::vector<std::int64_t> U;
        const int bound = 2;
        for (std::int64_t x = 0; x < p.shape().total_size(); ++x) {
          if (x != v && g.outdeg_scale(kappa, x) <= bound) U.push_back(x);
        }
        // Count in-edges directly: must be zero for the top-ranked vertex.
        int in_edges = 0;
        for (const auto& e : g.scale_edges().at(kappa)) {
          Point src = p.shape().point_at(e.src);
          if (p.shape().index_of(with_coordinate(src, e.coord, e.dest)) == v) ++in_edges;
        }
        CHECK(in_edges == 0);
        CHECK(verify::peel_indegree_bound_holds(g, kappa, U, v, bound));
      }
    }
  }
}

TEST_CASE("fault injection is caught by the auditor") {
  Rng rng(229);
  const Distribution p = random_dirichlet(GridShape({3, 3}), 0.5, rng);
  const auto g = graphs::build_orientation(p);
  REQUIRE(verify::audit_orientation(p, g).holds);
  const auto bad = graphs::corrupt_orientation_for_testing(g);
  CHECK(!verify::audit_orientation(p, bad).holds);
}

TEST_CASE("dot dump names every directed edge") {
  Rng rng(233);
  const Distribution p = random_dirichlet(GridShape({2, 2}), 0.5, rng);
  const auto g = graphs::build_orientation(p);
  const std::string dot = g.to_dot();
  CHECK(dot.find("digraph G {") == 0);
  std::int64_t arrows = 0;
  for (std::size_t pos = 0; (pos = dot.find("->", pos)) != std::string::npos; ++pos) ++arrows;
  CHECK(arrows == g.num_undirected_edges());
}

TEST_CASE("capacity and representation guards") {
  CHECK_THROWS_AS(graphs::build_orientation(Distribution::uniform(GridShape({2, 2}))),
                  ArgumentError);  // product body rejected
  const auto g = graphs::build_orientation(Distribution::uniform(GridShape({2, 2})).to_dense());
  CHECK_THROWS_AS(g.edge_class(0, 0, 0), ArgumentError);  // not an edge (b == x_i)
}
