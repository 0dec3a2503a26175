#include <cmath>
#include <doctest.h>

#include "hgut/dist_io.hpp"
#include "hgut/errors.hpp"
#include "hgut/harness.hpp"
#include "hgut/oracle.hpp"
#include "hgut/rng.hpp"
#include "hgut/testers.hpp"

using namespace hgut;
using testers::Decision;
using testers::TesterConfig;

namespace {

Distribution biased_product(int n, int biased, double mass0) {
  return io::make_generated(GridShape(std::vector<int>(static_cast<std::size_t>(n), 2)),
                            "biased_coord",
                            {{"num_biased", static_cast<double>(biased)}, {"mass0", mass0}}, 0);
}

}  // namespace

TEST_CASE("mean tester statistic") {
  const TesterConfig cfg = TesterConfig::practical(1);
  SUBCASE("all-ones stream computes Z = n exactly and rejects") {
    const int n = 16;
    auto stream = [n] { return std::vector<std::int8_t>(static_cast<std::size_t>(n), 1); };
    const auto v = testers::mean_tester(stream, n, 0.5, cfg);
    CHECK(v.decision == Decision::Reject);
    CHECK(v.trace.stat == doctest::Approx(16.0));  // threshold tau eps^2 n = 2
  }
  SUBCASE("iid fair bits are accepted") {
    const int n = 64;
    int accepts = 0;
    for (int trial = 0; trial < 200; ++trial) {
      Rng rng(1000 + static_cast<std::uint64_t>(trial));
      auto stream = [&rng, n] {
        std::vector<std::int8_t> x(static_cast<std::size_t>(n));
        for (auto& b : x) b = static_cast<std::int8_t>(rng.sign());
        return x;
      };
      accepts += (testers::mean_tester(stream, n, 0.5, cfg).decision == Decision::Accept);
    }
    CHECK(accepts >= 180);
  }
  SUBCASE("per-coordinate mean one half is rejected") {
    const int n = 64;
    int rejects = 0;
    for (int trial = 0; trial < 200; ++trial) {
      Rng rng(5000 + static_cast<std::uint64_t>(trial));
      auto stream = [&rng, n] {
        std::vector<std::int8_t> x(static_cast<std::size_t>(n));
        for (auto& b : x) b = static_cast<std::int8_t>(rng.bernoulli(0.75) ? 1 : -1);
        return x;
      };
      rejects += (testers::mean_tester(stream, n, 0.5, cfg).decision == Decision::Reject);
    }
    CHECK(rejects >= 180);
  }
  SUBCASE("sample-count guard") {
    TesterConfig tiny = cfg;
    tiny.c_mt = 0.5;
    auto stream = [] { return std::vector<std::int8_t>{1}; };
    CHECK_THROWS_AS(testers::mean_tester(stream, 1, 1.0, tiny), ConfigError);
  }
}

TEST_CASE("coarse test bands") {
  const TesterConfig cfg = TesterConfig::practical(2);
  SUBCASE("uniform accepted with high probability") {
    int accepts = 0;
    for (int trial = 0; trial < 60; ++trial) {
      auto oracle =
          make_oracle(Distribution::uniform(GridShape({3, 3, 3})), 100 + static_cast<std::uint64_t>(trial));
      accepts += (testers::coarse_test(*oracle, cfg).decision == Decision::Accept);
    }
    CHECK(accepts >= 58);  // far above the 1 - 1/n promise
  }
  SUBCASE("a missing symbol is rejected") {
    const Distribution p = Distribution::product(
        GridShape({3, 3, 3}), {{0.0, 0.5, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3},
                               {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    int rejects = 0;
    for (int trial = 0; trial < 60; ++trial) {
      auto oracle = make_oracle(p, 200 + static_cast<std::uint64_t>(trial));
      rejects += (testers::coarse_test(*oracle, cfg).decision == Decision::Reject);
    }
    CHECK(rejects == 60);  // the zero count always falls below N/(2 m_i)
  }
  SUBCASE("binary band arithmetic") {
    // For m_i = 2 the band is [N/4, N]: the upper bound can never trip, so a
    // coordinate seen in every sample still passes the upper check.
    auto oracle = make_oracle(Distribution::product(GridShape({2}), {{1.0, 0.0}}), 3);
    const auto v = testers::coarse_test(*oracle, cfg);
    // Pr[x = 1] = 0 trips the lower band instead.
    CHECK(v.decision == Decision::Reject);
  }
}

TEST_CASE("projected mean tester end to end") {
  const TesterConfig cfg = TesterConfig::practical(3);
  SUBCASE("uniform accepted") {
    int accepts = 0;
    for (int trial = 0; trial < 40; ++trial) {
      auto oracle = make_oracle(Distribution::uniform(GridShape({3, 3, 3, 3})),
                                300 + static_cast<std::uint64_t>(trial));
      accepts += (testers::projected_test_mean(*oracle, 0.25, cfg).decision == Decision::Accept);
    }
    CHECK(accepts >= 27);  // 2/3 of 40
  }
  SUBCASE("missing symbol rejected via the coarse stage") {
    const Distribution p = Distribution::product(
        GridShape({3, 3, 3}), {{0.0, 0.5, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3},
                               {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    int rejects = 0;
    for (int trial = 0; trial < 40; ++trial) {
      auto oracle = make_oracle(p, 400 + static_cast<std::uint64_t>(trial));
      rejects += (testers::projected_test_mean(*oracle, 0.25, cfg).decision == Decision::Reject);
    }
    CHECK(rejects >= 27);
  }
  SUBCASE("large bias norm rejected via the mean stage") {
    const Distribution p = Distribution::product(
        GridShape({3, 3, 3}), {{0.6, 0.2, 0.2}, {1.0 / 3, 1.0 / 3, 1.0 / 3},
                               {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    CHECK(bias_norm(p) == doctest::Approx(1.0));
    int rejects = 0;
    for (int trial = 0; trial < 30; ++trial) {
      auto oracle = make_oracle(p, 500 + static_cast<std::uint64_t>(trial));
      rejects += (testers::projected_test_mean(*oracle, 0.15, cfg).decision == Decision::Reject);
    }
    CHECK(rejects >= 20);
  }
  SUBCASE("accepting runs consume the analytic query count") {
    auto oracle = make_oracle(Distribution::uniform(GridShape({3, 3, 3, 3})), 999);
    const auto v = testers::projected_test_mean(*oracle, 0.25, cfg);
    REQUIRE(v.decision == Decision::Accept);
    CHECK(v.queries.total ==
          static_cast<std::uint64_t>(cfg.projected_test_mean_accept_samples(4, 3, 0.25)));
    CHECK(v.queries.total == oracle->ledger().total());  // no unbilled path
  }
}

TEST_CASE("base case tester") {
  const TesterConfig cfg = TesterConfig::practical(4);
  SUBCASE("uniform accepted") {
    int accepts = 0;
    for (int trial = 0; trial < 50; ++trial) {
      auto oracle =
          make_oracle(Distribution::uniform(GridShape({2, 2})), 600 + static_cast<std::uint64_t>(trial));
      accepts += (testers::base_case_tester(*oracle, 0.25, cfg).decision == Decision::Accept);
    }
    CHECK(accepts >= 34);
  }
  SUBCASE("point mass rejected") {
    std::vector<double> t = {1.0, 0.0, 0.0, 0.0};
    const Distribution p = Distribution::dense(GridShape({2, 2}), std::move(t));
    int rejects = 0;
    for (int trial = 0; trial < 50; ++trial) {
      auto oracle = make_oracle(p, 700 + static_cast<std::uint64_t>(trial));
      rejects += (testers::base_case_tester(*oracle, 0.25, cfg).decision == Decision::Reject);
    }
    CHECK(rejects == 50);  // every pair collides
  }
  SUBCASE("configuration guards") {
    TesterConfig tiny = cfg;
    tiny.c_bc = 1e-9;
    auto oracle = make_oracle(Distribution::uniform(GridShape({2, 2})), 1);
    CHECK_THROWS_AS(testers::base_case_tester(*oracle, 1.0, tiny), ConfigError);
    TesterConfig capped = cfg;
    capped.base_case_cap = 3;
    CHECK_THROWS_AS(testers::base_case_tester(*oracle, 0.25, capped), ConfigError);
  }
}

TEST_CASE("recursive tester") {
  SUBCASE("eps domain") {
    auto oracle = make_oracle(Distribution::uniform(GridShape({2, 2})), 1);
    CHECK_THROWS_AS(testers::sub_cond_uni(*oracle, 0.75, TesterConfig::practical(1)),
                    ArgumentError);
    CHECK_THROWS_AS(testers::sub_cond_uni(*oracle, 0.0, TesterConfig::practical(1)),
                    ArgumentError);
  }
  SUBCASE("identical seeds give identical verdicts and ledgers") {
    const Distribution p = biased_product(16, 8, 0.75);
    auto run = [&p] {
      auto oracle = make_oracle(p, 424242);
      return testers::sub_cond_uni(*oracle, 0.25, TesterConfig::practical(7));
    };
    const auto a = run();
    const auto b = run();
    CHECK(a.decision == b.decision);
    CHECK(a.queries == b.queries);
  }
  SUBCASE("uniform accepted on a small grid (base-case regime)") {
    int accepts = 0;
    for (int trial = 0; trial < 40; ++trial) {
      auto oracle = make_oracle(Distribution::uniform(GridShape({3, 3, 3, 3})),
                                800 + static_cast<std::uint64_t>(trial));
      accepts +=
          (testers::sub_cond_uni(*oracle, 0.25, TesterConfig::practical(1)).decision ==
           Decision::Accept);
    }
    CHECK(accepts >= 27);
  }
  SUBCASE("biased product over 16 binary coordinates rejected") {
    const Distribution p = biased_product(16, 8, 0.75);
    int rejects = 0;
    for (int trial = 0; trial < 40; ++trial) {
      auto oracle = make_oracle(p, 900 + static_cast<std::uint64_t>(trial));
      rejects +=
          (testers::sub_cond_uni(*oracle, 0.25, TesterConfig::practical(2)).decision ==
           Decision::Reject);
    }
    CHECK(rejects >= 27);
  }
  SUBCASE("main path stays shallow and never hits zero-mass subcubes") {
    const Distribution p = biased_product(64, 8, 0.75);
    for (int trial = 0; trial < 5; ++trial) {
      auto oracle = make_oracle(p, 1100 + static_cast<std::uint64_t>(trial));
      const auto v = testers::sub_cond_uni(*oracle, 0.4, TesterConfig::practical(3));
      CHECK(v.depth_max <= 4);
    }
  }
  SUBCASE("main path soundness on the biased product family") {
    const Distribution p = biased_product(64, 8, 0.75);
    int rejects = 0;
    for (int trial = 0; trial < 24; ++trial) {
      auto oracle = make_oracle(p, 1200 + static_cast<std::uint64_t>(trial));
      rejects +=
          (testers::sub_cond_uni(*oracle, 0.4, TesterConfig::practical(4)).decision ==
           Decision::Reject);
    }
    CHECK(rejects >= 16);
  }
  SUBCASE("main path completeness pays the full budget and accepts") {
    // The slowest test in the suite: an accepting run at n = 64 walks every
    // dyadic bucket (about 1e7 queries per trial). A throw anywhere would
    // fail the test, so this also pins "no ZeroMassSubcube on full support".
    const int n = 64;
    const double eps = 0.4;
    const Distribution u = Distribution::uniform(GridShape(std::vector<int>(n, 2)));
    int accepts = 0;
    // Practical budget envelope, the sqrt(n)-shaped bound all runs obey.
    const double budget = 50.0 * 16.0 * std::sqrt(static_cast<double>(n)) *
                          std::pow(std::log2(16.0 * n * 2 / eps), 4.0) / (eps * eps);
    for (const auto& r :
         harness::run_trials(u, eps, TesterConfig::practical(5), 9, 1300)) {
      accepts += (r.decision == Decision::Accept);
      CHECK(static_cast<double>(r.queries.total) <= budget);
    }
    CHECK(accepts >= 6);
  }
  SUBCASE("theory mode routes desk-scale inputs to the base case") {
    auto oracle = make_oracle(Distribution::uniform(GridShape({2, 2, 2})), 5);
    const auto cfg = TesterConfig::theory(5);
    cfg.validate();
    CHECK(cfg.sigma(0.25) < 1e-10);  // published constants are astronomical
    CHECK(cfg.base_case_gate(3, 0.4));
    const auto v = testers::sub_cond_uni(*oracle, 0.4, cfg);
    REQUIRE(v.trace.children.size() == 1);
    CHECK(v.trace.children[0].label == "base_case");
  }
}
