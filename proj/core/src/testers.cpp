#include "hgut/testers.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "hgut/errors.hpp"

namespace hgut::testers {

namespace {

double log2d(double x) { return std::log2(x); }

int make_odd(int r) { return (r % 2 == 0) ? r + 1 : r; }

int odd_reps(double scaled) {
  const int r = std::max(1, static_cast<int>(std::ceil(scaled)));
  return make_odd(r);
}

}  // namespace

TesterConfig TesterConfig::practical(std::uint64_t seed) {
  TesterConfig cfg;
  cfg.mode = Mode::Practical;
  cfg.seed = seed;
  return cfg;
}

TesterConfig TesterConfig::theory(std::uint64_t seed) {
  TesterConfig cfg;
  cfg.mode = Mode::Theory;
  // Published formula constants; the leading factors of the polylog terms
  // are pragmatic choices, the shapes are not.
  cfg.c0 = 2.0 * std::pow(32.0 * 32.0 * 100.0, 2.0);
  cfg.sigma_max = 1.0;
  cfg.gate_divisor = 10.0;
  cfg.c_L = 1000.0;
  cfg.mexp_L = 8.5;
  cfg.c_s1 = 1.0;
  cfg.c_s2 = 1.0;
  cfg.c_r = 9.0;
  cfg.c_trep = 100.0;
  cfg.c_ct = 40.0;
  cfg.c_pr = 3.0;
  cfg.c_mt = 1000.0;
  cfg.tau = 0.5;
  cfg.c_bc = 100.0;
  cfg.seed = seed;
  return cfg;
}

void TesterConfig::validate() const {
  const double multipliers[] = {c0,  sigma_max, gate_divisor, c_L,  c_s1, c_s2, c_r,
                                c_trep, c_ct,      c_pr,         c_mt, tau,  c_bc};
  for (double v : multipliers) {
    if (!(v > 0.0)) throw ConfigError("TesterConfig: all multipliers must be > 0");
  }
  if (sigma_max > 1.0) throw ConfigError("TesterConfig: sigma_max must be <= 1");
  if (max_depth < 0 || max_depth >= QueryLedger::kMaxDepth) {
    throw ConfigError("TesterConfig: max_depth out of range");
  }
}

double TesterConfig::sigma(double eps) const {
  const double l = std::log(16.0 / eps);
  return std::min(sigma_max, 1.0 / (c0 * l * l * l * l));
}

bool TesterConfig::base_case_gate(int n, double eps) const {
  return std::exp(-sigma(eps) * static_cast<double>(n) / gate_divisor) > eps / 8.0;
}

bool TesterConfig::recursion_executable(const GridShape& sub_shape, double eps) const {
  if (!base_case_gate(sub_shape.n(), eps)) return true;
  return sub_shape.total_size() <= base_case_cap;
}

std::int64_t TesterConfig::mean_tester_samples(int n, double eps) const {
  const double need = std::max(1.0 / (eps * eps * std::sqrt(static_cast<double>(n))), 1.0 / eps);
  return static_cast<std::int64_t>(std::ceil(c_mt * need));
}

std::int64_t TesterConfig::coarse_test_samples(int n, int m) const {
  return static_cast<std::int64_t>(
      std::ceil(c_ct * m * std::log(static_cast<double>(m) * n + 1.0)));
}

int TesterConfig::mean_tester_reps(int m) const { return odd_reps(c_pr * log2d(m + 1.0)); }

int TesterConfig::projected_reps(int n, int m, double eps) const {
  return odd_reps(c_r * log2d(static_cast<double>(n) * m / eps));
}

int TesterConfig::recursion_reps(double eps) const {
  return odd_reps(c_trep * log2d(16.0 / eps));
}

std::int64_t TesterConfig::projected_test_mean_accept_samples(int n, int m, double eps) const {
  std::int64_t total = coarse_test_samples(n, m);
  const double eps_mt = eps / (2.0 * m);
  total += static_cast<std::int64_t>(m) * m * mean_tester_reps(m) *
           mean_tester_samples(n, eps_mt);
  return total;
}

std::int64_t TesterConfig::base_case_samples(std::int64_t total_size, double eps) const {
  return static_cast<std::int64_t>(
      std::ceil(c_bc * std::sqrt(static_cast<double>(total_size)) / (eps * eps)));
}

Verdict mean_tester(const BitSampler& stream, int n, double eps, const TesterConfig& cfg) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ArgumentError("mean_tester: eps in (0,1]");
  if (n < 1) throw ArgumentError("mean_tester: n >= 1");
  const std::int64_t N = cfg.mean_tester_samples(n, eps);
  if (N < 2) throw ConfigError("mean_tester: needs at least 2 samples; raise c_mt");

  // Z = (||sum_j x_j||^2 - N n) / (N (N-1)); each |x_j|^2 = n.
  std::vector<std::int64_t> sums(static_cast<std::size_t>(n), 0);
  for (std::int64_t j = 0; j < N; ++j) {
    const std::vector<std::int8_t> x = stream();
    if (static_cast<int>(x.size()) != n) throw ArgumentError("mean_tester: stream dimension");
    for (int i = 0; i < n; ++i) sums[static_cast<std::size_t>(i)] += x[static_cast<std::size_t>(i)];
  }
  double norm_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(sums[static_cast<std::size_t>(i)]);
    norm_sq += s * s;
  }
  const double z = (norm_sq - static_cast<double>(N) * n) /
                   (static_cast<double>(N) * (static_cast<double>(N) - 1.0));
  const double threshold = cfg.tau * eps * eps * static_cast<double>(n);

  Verdict v;
  v.decision = (z <= threshold) ? Decision::Accept : Decision::Reject;
  v.trace = TraceNode{"mean", v.decision, z, 0, {}};
  return v;
}

Verdict coarse_test(SubcubeOracle& oracle, const TesterConfig& cfg) {
  const GridShape& shape = oracle.shape();
  const int n = shape.n();
  const int m = shape.max_side();
  const std::int64_t N = cfg.coarse_test_samples(n, m);

  ScopedAttribution attr(oracle, Phase::Coarse, oracle.depth());
  std::vector<std::vector<std::int64_t>> counts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) counts[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(shape.side(i)), 0);
  for (std::int64_t j = 0; j < N; ++j) {
    const Point x = oracle.sample_all_stars();
    for (int i = 0; i < n; ++i) {
      ++counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(x[static_cast<std::size_t>(i)])];
    }
  }
  Decision decision = Decision::Accept;
  for (int i = 0; i < n && decision == Decision::Accept; ++i) {
    const double mi = static_cast<double>(shape.side(i));
    for (Symbol a = 0; a < shape.side(i); ++a) {
      const double c = static_cast<double>(counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]);
      if (c > 2.0 * static_cast<double>(N) / mi || c < static_cast<double>(N) / (2.0 * mi)) {
        decision = Decision::Reject;
        break;
      }
    }
  }
  Verdict v;
  v.decision = decision;
  v.queries = oracle.ledger().snapshot();
  v.trace = TraceNode{"coarse", decision, static_cast<double>(N), oracle.depth(), {}};
  return v;
}

Verdict projected_test_mean(SubcubeOracle& oracle, double eps, const TesterConfig& cfg) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ArgumentError("projected_test_mean: eps in (0,1]");
  const GridShape& shape = oracle.shape();
  const int n = shape.n();
  const int m = shape.max_side();

  Verdict v;
  v.trace = TraceNode{"projected_test_mean", Decision::Accept, eps, oracle.depth(), {}};

  Verdict coarse = coarse_test(oracle, cfg);
  v.trace.children.push_back(coarse.trace);
  if (coarse.decision == Decision::Reject) {
    v.decision = Decision::Reject;
    v.trace.decision = v.decision;
    v.queries = oracle.ledger().snapshot();
    return v;
  }

  const double eps_mt = eps / (2.0 * m);
  const int reps = cfg.mean_tester_reps(m);
  for (int k = 1; k <= m * m; ++k) {
    ProjectedSampleStream stream(oracle, k);
    int rejects = 0;
    for (int q = 0; q < reps; ++q) {
      ScopedAttribution attr(oracle, Phase::Mean, oracle.depth());
      Verdict mt = mean_tester([&stream] { return stream.next(); }, n, eps_mt, cfg);
      mt.trace.label = "mean k=" + std::to_string(k);
      mt.trace.depth = oracle.depth();
      v.trace.children.push_back(mt.trace);
      if (mt.decision == Decision::Reject) ++rejects;
    }
    if (2 * rejects > reps) {
      v.decision = Decision::Reject;
      v.trace.decision = v.decision;
      v.queries = oracle.ledger().snapshot();
      return v;
    }
  }
  v.decision = Decision::Accept;
  v.queries = oracle.ledger().snapshot();
  return v;
}

Verdict base_case_tester(SubcubeOracle& oracle, double eps, const TesterConfig& cfg) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ArgumentError("base_case_tester: eps in (0,1]");
  const GridShape& shape = oracle.shape();
  const std::int64_t K = shape.total_size();
  if (K > cfg.base_case_cap) {
    throw ConfigError("base_case_tester: domain of " + std::to_string(K) +
                      " cells exceeds base_case_cap; cfg must route only small domains here");
  }
  const std::int64_t N = cfg.base_case_samples(K, eps);
  if (N < 2) throw ConfigError("base_case_tester: needs at least 2 samples");

  ScopedAttribution attr(oracle, Phase::Recurse, oracle.depth());
  std::unordered_map<std::int64_t, std::int64_t> counts;
  counts.reserve(static_cast<std::size_t>(std::min<std::int64_t>(N, K)) * 2);
  for (std::int64_t j = 0; j < N; ++j) {
    const Point x = oracle.sample_all_stars();
    ++counts[shape.index_of(x)];
  }
  double colliding_pairs = 0.0;
  for (const auto& [cell, c] : counts) {
    colliding_pairs += static_cast<double>(c) * (static_cast<double>(c) - 1.0) / 2.0;
  }
  const double pairs = static_cast<double>(N) * (static_cast<double>(N) - 1.0) / 2.0;
  const double rate = colliding_pairs / pairs;  // unbiased for ||p||_2^2
  const double threshold = (1.0 + eps * eps / 2.0) / static_cast<double>(K);

  Verdict v;
  v.decision = (rate < threshold) ? Decision::Accept : Decision::Reject;
  v.queries = oracle.ledger().snapshot();
  v.trace = TraceNode{"base_case", v.decision, rate * static_cast<double>(K), oracle.depth(), {}};
  v.depth_max = oracle.depth();
  return v;
}

Restriction draw_restriction_via_oracle(SubcubeOracle& oracle, double sigma) {
  const int n = oracle.shape().n();
  const std::vector<int> stars = oracle.rng().bernoulli_subset(n, sigma);
  const Point x = oracle.sample_all_stars();
  std::vector<int> entries(x.begin(), x.end());
  for (int s : stars) entries[static_cast<std::size_t>(s)] = Restriction::kStar;
  return Restriction(std::move(entries));
}

namespace {

Verdict sub_cond_uni_impl(SubcubeOracle& oracle, double eps, const TesterConfig& cfg, int depth) {
  if (depth > cfg.max_depth) {
    throw DepthExceededError("sub_cond_uni: recursion depth " + std::to_string(depth) +
                             " exceeds cap " + std::to_string(cfg.max_depth));
  }
  oracle.set_attribution(Phase::Recurse, depth);
  const GridShape& shape = oracle.shape();
  const int n = shape.n();
  const int m = shape.max_side();

  Verdict v;
  v.trace = TraceNode{"sub_cond_uni eps=" + std::to_string(eps), Decision::Accept, eps, depth, {}};
  v.depth_max = depth;

  if (cfg.base_case_gate(n, eps)) {
    Verdict base = base_case_tester(oracle, eps, cfg);
    v.decision = base.decision;
    v.trace.children.push_back(base.trace);
    v.trace.decision = v.decision;
    v.queries = oracle.ledger().snapshot();
    return v;
  }

  const double sigma = cfg.sigma(eps);
  const double L = cfg.c_L * std::pow(static_cast<double>(m), cfg.mexp_L) *
                   std::sqrt(static_cast<double>(n)) / eps;

  // Stage 1: projected mean tests on random restrictions at dyadic scales.
  const int jmax1 = std::max(1, static_cast<int>(std::ceil(log2d(2.0 * L))));
  for (int j = 1; j <= jmax1; ++j) {
    const double eps_j = std::pow(2.0, -j);
    const std::int64_t s_j = static_cast<std::int64_t>(
        std::floor(cfg.c_s1 * 8.0 * L * log2d(2.0 * L) * eps_j));
    for (std::int64_t rep = 0; rep < s_j; ++rep) {
      oracle.set_attribution(Phase::Recurse, depth);
      const Restriction rho = draw_restriction_via_oracle(oracle, sigma);
      if (rho.num_stars() == 0) continue;
      auto view = oracle.restricted_view(rho);
      const int r = cfg.projected_reps(n, m, eps);
      int rejects = 0;
      TraceNode node{"stage1 j=" + std::to_string(j), Decision::Accept, eps_j, depth, {}};
      for (int q = 0; q < r; ++q) {
        Verdict ptm = projected_test_mean(*view, eps_j, cfg);
        node.children.push_back(ptm.trace);
        if (ptm.decision == Decision::Reject) ++rejects;
      }
      node.decision = (2 * rejects > r) ? Decision::Reject : Decision::Accept;
      v.trace.children.push_back(std::move(node));
      if (2 * rejects > r) {
        v.decision = Decision::Reject;
        v.trace.decision = v.decision;
        v.queries = oracle.ledger().snapshot();
        return v;
      }
    }
  }

  // Stage 2: recursion on restrictions that keep few stars.
  const int jmax2 = std::max(1, static_cast<int>(std::ceil(log2d(4.0 / eps))));
  for (int j = 1; j <= jmax2; ++j) {
    const double eps_j = std::pow(2.0, -j);
    const std::int64_t s_j = static_cast<std::int64_t>(
        std::floor(cfg.c_s2 * (32.0 / eps) * log2d(4.0 / eps) * eps_j));
    for (std::int64_t rep = 0; rep < s_j; ++rep) {
      oracle.set_attribution(Phase::Recurse, depth);
      const Restriction rho = draw_restriction_via_oracle(oracle, sigma);
      const int stars = rho.num_stars();
      if (stars == 0 || static_cast<double>(stars) > 2.0 * sigma * static_cast<double>(n)) {
        continue;
      }
      if (!cfg.recursion_executable(shape.sub_shape(rho.stars()), eps_j)) continue;
      auto view = oracle.restricted_view(rho);
      const int t_rep = cfg.recursion_reps(eps);
      int rejects = 0;
      int deepest = depth;
      TraceNode node{"stage2 j=" + std::to_string(j), Decision::Accept, eps_j, depth, {}};
      for (int q = 0; q < t_rep; ++q) {
        Verdict rec = sub_cond_uni_impl(*view, eps_j, cfg, depth + 1);
        deepest = std::max(deepest, rec.depth_max);
        node.children.push_back(rec.trace);
        if (rec.decision == Decision::Reject) ++rejects;
      }
      v.depth_max = std::max(v.depth_max, deepest);
      node.decision = (2 * rejects > t_rep) ? Decision::Reject : Decision::Accept;
      v.trace.children.push_back(std::move(node));
      if (2 * rejects > t_rep) {
        v.decision = Decision::Reject;
        v.trace.decision = v.decision;
        v.queries = oracle.ledger().snapshot();
        return v;
      }
    }
  }

  v.decision = Decision::Accept;
  v.queries = oracle.ledger().snapshot();
  return v;
}

}  // namespace

Verdict sub_cond_uni(SubcubeOracle& oracle, double eps, const TesterConfig& cfg) {
  if (!(eps > 0.0 && eps <= 0.5)) throw ArgumentError("sub_cond_uni: eps in (0, 1/2]");
  cfg.validate();
  return sub_cond_uni_impl(oracle, eps, cfg, 0);
}

}  // namespace hgut::testers
