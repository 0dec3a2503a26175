#include "hgut/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hgut/dist_io.hpp"
#include "hgut/edge_graphs.hpp"
#include "hgut/errors.hpp"
#include "hgut/fourier.hpp"
#include "hgut/oracle.hpp"
#include "hgut/pisier.hpp"
#include "hgut/verify.hpp"

namespace hgut::harness {

using nlohmann::json;
using testers::Decision;
using testers::TesterConfig;
using verify::VerificationReport;

int thread_cap() {
  if (const char* env = std::getenv("HGUT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
  const int workers = std::min<std::int64_t>(thread_cap(), count);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<TrialResult> run_trials(const Distribution& dist, double eps,
                                    const TesterConfig& cfg, int trials, std::uint64_t seed) {
  std::vector<TrialResult> out(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](std::int64_t i) {
    const auto start = std::chrono::steady_clock::now();
    auto oracle = make_oracle(dist, Rng(seed).split(static_cast<std::uint64_t>(i)).seed());
    TesterConfig trial_cfg = cfg;
    trial_cfg.seed = seed;
    const testers::Verdict v = testers::sub_cond_uni(*oracle, eps, trial_cfg);
    const auto end = std::chrono::steady_clock::now();
    TrialResult r;
    r.trial = static_cast<int>(i);
    r.decision = v.decision;
    r.queries = v.queries;
    r.depth_max = v.depth_max;
    r.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
    out[static_cast<std::size_t>(i)] = std::move(r);
  });
  return out;
}

std::string trials_to_csv(const std::vector<TrialResult>& rows) {
  std::ostringstream os;
  os << "# schema: hgut-trials-v1\n";
  os << "trial,verdict,queries_total,queries_coarse,queries_mean,queries_recurse,depth_max,"
        "wall_ms\n";
  for (const auto& r : rows) {
    os << r.trial << ',' << (r.decision == Decision::Accept ? "accept" : "reject") << ','
       << r.queries.total << ',' << r.queries.coarse << ',' << r.queries.mean << ','
       << r.queries.recurse << ',' << r.depth_max << ',' << r.wall_ms << '\n';
  }
  return os.str();
}

std::string trials_to_json(const std::vector<TrialResult>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"trial", r.trial},
                   {"verdict", r.decision == Decision::Accept ? "accept" : "reject"},
                   {"queries_total", r.queries.total},
                   {"queries_by_phase",
                    {{"coarse", r.queries.coarse},
                     {"mean", r.queries.mean},
                     {"recurse", r.queries.recurse}}},
                   {"depth_max", r.depth_max},
                   {"wall_ms", r.wall_ms}});
  }
  return arr.dump(2);
}

namespace {

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * (static_cast<double>(values.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw ArgumentError("run_experiment: trials >= 1 required");
  if (spec.shapes.empty() || spec.eps_grid.empty()) {
    throw ArgumentError("run_experiment: shape and eps grids must be nonempty");
  }
  ExperimentOutcome outcome;
  std::uint64_t cell = 0;
  for (const auto& dims : spec.shapes) {
    const GridShape shape(dims);
    const Distribution dist =
        io::make_generated(shape, spec.generator, spec.params, Rng(spec.seed).split(cell).seed());
    for (double eps : spec.eps_grid) {
      TesterConfig cfg = (spec.mode == testers::Mode::Theory)
                             ? TesterConfig::theory(spec.seed)
                             : TesterConfig::practical(spec.seed);
      const auto trials =
          run_trials(dist, eps, cfg, spec.trials, Rng(spec.seed).split(cell * 7919 + 13).seed());
      ResultRow row;
      row.experiment = spec.name;
      row.shape = shape.to_string();
      row.eps = eps;
      row.trials = spec.trials;
      std::vector<double> queries;
      for (const auto& t : trials) {
        row.accept_count += (t.decision == Decision::Accept);
        queries.push_back(static_cast<double>(t.queries.total));
        row.wall_ms += t.wall_ms;
      }
      row.mean_queries =
          std::accumulate(queries.begin(), queries.end(), 0.0) / static_cast<double>(spec.trials);
      row.p95_queries = percentile(queries, 0.95);
      const double accept_rate = static_cast<double>(row.accept_count) / spec.trials;
      if (spec.min_accept_rate >= 0.0 && accept_rate < spec.min_accept_rate) {
        outcome.assertions_pass = false;
      }
      if (spec.min_reject_rate >= 0.0 && (1.0 - accept_rate) < spec.min_reject_rate) {
        outcome.assertions_pass = false;
      }
      outcome.rows.push_back(std::move(row));
      ++cell;
    }
  }
  std::sort(outcome.rows.begin(), outcome.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.experiment, a.shape, a.eps) < std::tie(b.experiment, b.shape, b.eps);
  });
  if (!spec.out_path.empty()) {
    if (spec.out_path.size() >= 5 && spec.out_path.substr(spec.out_path.size() - 5) == ".json") {
      json arr = json::array();
      for (const auto& r : outcome.rows) {
        arr.push_back({{"experiment", r.experiment},
                       {"shape", r.shape},
                       {"eps", r.eps},
                       {"accept_count", r.accept_count},
                       {"trials", r.trials},
                       {"mean_queries", r.mean_queries},
                       {"p95_queries", r.p95_queries},
                       {"wall_ms", r.wall_ms}});
      }
      io::write_text_file(spec.out_path, arr.dump(2) + "\n");
    } else {
      io::write_text_file(spec.out_path, rows_to_csv(outcome.rows));
    }
  }
  return outcome;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "# schema: hgut-results-v1\n";
  os << "experiment,shape,eps,accept_count,trials,mean_queries,p95_queries,wall_ms\n";
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.shape << ',' << r.eps << ',' << r.accept_count << ','
       << r.trials << ',' << r.mean_queries << ',' << r.p95_queries << ',' << r.wall_ms << '\n';
  }
  return os.str();
}

double annotated_tv(const Distribution& p) {
  if (p.is_dense()) return tv_to_uniform(p);
  // Product form: TV against uniform equals the TV of the non-uniform block
  // (the remaining coordinates are exactly uniform and independent).
  std::vector<int> block;
  for (int i = 0; i < p.shape().n(); ++i) {
    const auto& q = p.marginal_weights(i);
    const double u = 1.0 / static_cast<double>(q.size());
    for (double w : q) {
      if (std::abs(w - u) > 1e-15) {
        block.push_back(i);
        break;
      }
    }
  }
  if (block.empty()) return 0.0;
  std::int64_t cells = 1;
  for (int i : block) cells *= p.shape().side(i);
  if (cells > kDefaultDenseCap) {
    throw CapacityError("annotated_tv: non-uniform block too large for exact TV");
  }
  return tv_to_uniform(project(p, block).to_dense());
}

std::vector<CorpusFileInfo> generate_corpus(const CorpusOptions& options) {
  static const std::vector<std::string> kinds = {
      "uniform", "dirichlet", "biased_coord", "heavy_atom", "perturbed_uniform", "product_biased"};
  if (std::find(kinds.begin(), kinds.end(), options.kind) == kinds.end()) {
    throw ArgumentError("generate_corpus: unknown kind \"" + options.kind + "\"");
  }
  if (options.count < 1) throw ArgumentError("generate_corpus: count >= 1");
  const GridShape shape(options.shape);
  // product_biased is the product-form biased-coordinate family.
  const std::string generator = (options.kind == "product_biased") ? "biased_coord" : options.kind;

  std::filesystem::create_directories(options.outdir);
  std::vector<CorpusFileInfo> files;
  std::uint64_t attempt = 0;
  const std::uint64_t max_attempts = 200 * static_cast<std::uint64_t>(options.count) + 200;
  while (static_cast<int>(files.size()) < options.count) {
    if (attempt > max_attempts) {
      throw ArgumentError("generate_corpus: could not reach the d_TV floor " +
                          std::to_string(options.floor) + " for kind " + options.kind);
    }
    const std::uint64_t sub_seed = Rng(options.seed).split(attempt++).seed();
    const Distribution dist = io::make_generated(shape, generator, options.params, sub_seed);
    const double d_tv = annotated_tv(dist);
    if (d_tv + 1e-15 < options.floor) continue;
    std::ostringstream name;
    name << options.kind << '_' << std::setw(3) << std::setfill('0') << files.size() << ".json";
    const std::string path = (std::filesystem::path(options.outdir) / name.str()).string();
    io::save_distribution_file(path, dist, d_tv);
    files.push_back({path, d_tv});
  }
  // Manifest is timestamp-free; volatile metadata goes to the sidecar.
  json manifest = json::array();
  for (const auto& f : files) {
    manifest.push_back({{"path", std::filesystem::path(f.path).filename().string()},
                        {"d_tv", f.d_tv}});
  }
  io::write_text_file((std::filesystem::path(options.outdir) / "manifest.json").string(),
                      manifest.dump(2) + "\n");
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  json meta = {{"generated_unix_ms",
                std::chrono::duration_cast<std::chrono::milliseconds>(now).count()}};
  io::write_text_file((std::filesystem::path(options.outdir) / "manifest.meta.json").string(),
                      meta.dump(2) + "\n");
  return files;
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

namespace {

Distribution random_dirichlet(const GridShape& shape, double alpha, Rng& rng) {
  return Distribution::dense(shape,
                             rng.dirichlet(alpha, static_cast<std::size_t>(shape.total_size())));
}

/// Dense instance whose coordinate marginals sit inside [1/(4 m_i), 4/m_i].
Distribution random_band_instance(const GridShape& shape, Rng& rng) {
  for (int tries = 0; tries < 1000; ++tries) {
    Distribution d = random_dirichlet(shape, 3.0, rng);
    bool ok = true;
    for (int i = 0; i < shape.n() && ok; ++i) {
      const double mi = static_cast<double>(shape.side(i));
      for (Symbol a = 0; a < shape.side(i); ++a) {
        const double q = d.coordinate_marginal(i, a);
        if (q < 1.0 / (4.0 * mi) || q > 4.0 / mi) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return d;
  }
  throw ArgumentError("random_band_instance: could not satisfy the marginal band");
}

struct PisierInstance {
  Distribution ell;
  fourier::ComplexField f;
  graphs::OrientedEdgeSet graph;
};

const std::vector<std::vector<int>>& pisier_shapes() {
  static const std::vector<std::vector<int>> shapes = {
      {6, 6},  {4, 4},          {3, 4, 4},       {2, 3, 4},    {3, 3, 3},
      {2, 2, 3, 4}, {2, 2, 2, 3}, {2, 2, 2, 2, 3}, {2, 2, 2, 2, 2}};
  return shapes;
}

PisierInstance make_pisier_instance(const GridShape& shape, Rng& rng, bool f_from_ell) {
  Distribution ell = random_dirichlet(shape, 0.8, rng);
  graphs::OrientedEdgeSet graph = graphs::build_orientation(ell);
  fourier::ComplexField f = fourier::ComplexField::zero(shape);
  if (f_from_ell) {
    std::vector<fourier::Cplx> vals(static_cast<std::size_t>(shape.total_size()));
    const double cells = static_cast<double>(shape.total_size());
    for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
      vals[static_cast<std::size_t>(idx)] = fourier::Cplx(cells * ell.mass_at_index(idx) - 1.0, 0);
    }
    f = fourier::ComplexField(shape, std::move(vals));
  } else {
    f = fourier::ComplexField::random(shape, rng, /*mean_zero=*/true);
  }
  return PisierInstance{std::move(ell), std::move(f), std::move(graph)};
}

struct PisierRatios {
  double plain = 0.0;
  double robust_built = 0.0;
  double robust_random_max = 0.0;
};

PisierRatios pisier_ratios(const PisierInstance& inst, Rng& rng, int random_orients) {
  const GridShape& shape = inst.f.shape();
  const double lf = verify::log_factor(shape.n());
  const double lhs = fourier::lp_norm(inst.f, 1.0);
  PisierRatios r;
  r.plain = VerificationReport::safe_ratio(lhs, lf * pisier::plain_rhs(inst.f, 1.0));
  r.robust_built = VerificationReport::safe_ratio(
      lhs, lf * pisier::robust_rhs(inst.f, 1.0, pisier::Orientation::from_edge_set(inst.graph)));
  for (int q = 0; q < random_orients; ++q) {
    const auto orient = pisier::Orientation::random(shape, rng);
    r.robust_random_max = std::max(
        r.robust_random_max,
        VerificationReport::safe_ratio(lhs, lf * pisier::robust_rhs(inst.f, 1.0, orient)));
  }
  return r;
}

}  // namespace

CalibratedConstants calibrate_constants(std::uint64_t seed, int instances,
                                        std::int64_t max_cells) {
  CalibratedConstants c;
  Rng base(seed);
  const auto& shapes = pisier_shapes();
  double inv_witness_max = 0.0;
  for (int i = 0; i < instances; ++i) {
    Rng rng = base.split(static_cast<std::uint64_t>(i));
    const auto& dims = shapes[static_cast<std::size_t>(i) % shapes.size()];
    const GridShape shape(dims);
    if (shape.total_size() > max_cells) continue;
    PisierInstance inst = make_pisier_instance(shape, rng, i % 2 == 0);
    const PisierRatios r = pisier_ratios(inst, rng, 10);
    c.pisier_plain = std::max(c.pisier_plain, r.plain);
    c.pisier_robust = std::max({c.pisier_robust, r.robust_built, r.robust_random_max});
    const auto terms = verify::tv_edge_bound_terms(inst.ell);
    c.tv_edge = std::max(c.tv_edge, VerificationReport::safe_ratio(terms.lhs_raw, terms.rhs_raw));
    const double witness = verify::outdegree_case_witness(inst.ell);
    if (witness > 0.0) inv_witness_max = std::max(inv_witness_max, 1.0 / witness);
  }
  // Freeze with a 1.25x safety margin over the worst calibration ratio.
  c.pisier_plain *= 1.25;
  c.pisier_robust *= 1.25;
  c.tv_edge *= 1.25;
  c.case_witness = inv_witness_max * 1.25;
  return c;
}

namespace {

void add_report(SuiteResult& result, VerificationReport rep, bool monitored = false) {
  if (monitored) {
    rep.name = "monitored_" + rep.name;
    rep.holds = true;
  } else if (!rep.holds) {
    result.all_hard_pass = false;
  }
  result.reports.push_back(std::move(rep));
}

void run_identity_suite(SuiteResult& result, const SuiteOptions& options) {
  using fourier::ComplexField;
  Rng base(options.seed ^ 0x1DE47177ULL);
  const std::vector<std::vector<int>> shapes = {{3, 2}, {2, 2, 2}, {3, 3}, {4, 3}};
  const int per_shape = std::max(5, options.corpus_size);

  for (const auto& dims : shapes) {
    const GridShape shape(dims);
    VerificationReport round{"fourier_round_trip", shape.to_string()};
    VerificationReport parseval{"parseval", shape.to_string()};
    VerificationReport lap{"laplacian_dual_path", shape.to_string()};
    VerificationReport noise{"noise_operator_dual_path", shape.to_string()};
    VerificationReport smooth{"two_point_smooth_dual_path", shape.to_string()};
    for (auto* rep : {&round, &parseval, &lap, &noise, &smooth}) {
      rep->is_identity = true;
      rep->tolerance = 1e-9;
      rep->holds = true;
    }
    for (int i = 0; i < per_shape; ++i) {
      Rng rng = base.split(static_cast<std::uint64_t>(i) * 131 + shape.total_size());
      const ComplexField f = ComplexField::random(shape, rng, false);
      const auto coeffs = fourier::dft(f);
      const ComplexField back = fourier::idft(coeffs);
      double dev = 0.0;
      for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
        dev = std::max(dev, std::abs(f[idx] - back[idx]));
      }
      round.deviation = std::max(round.deviation, dev);
      double power_x = 0.0, power_u = 0.0;
      for (const auto& v : f.values()) power_x += std::norm(v);
      power_x /= static_cast<double>(shape.total_size());
      for (const auto& v : coeffs.values()) power_u += std::norm(v);
      parseval.deviation = std::max(parseval.deviation, std::abs(power_x - power_u));

      for (int c = 0; c < shape.n(); ++c) {
        const ComplexField a = fourier::laplacian(f, c);
        const ComplexField b = fourier::laplacian_spectral(f, c);
        for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
          lap.deviation = std::max(lap.deviation, std::abs(a[idx] - b[idx]));
        }
      }
      const double rho = 0.3 + 0.5 * rng.canonical();
      const ComplexField ta = fourier::noise_operator(f, rho);
      const ComplexField tb = fourier::noise_operator_spectral(f, rho);
      for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
        noise.deviation = std::max(noise.deviation, std::abs(ta[idx] - tb[idx]));
      }
      const double t = 0.2 + 0.6 * rng.canonical();
      const Point x = shape.point_at(static_cast<std::int64_t>(
          rng.below(static_cast<std::uint64_t>(shape.total_size()))));
      const Point y = shape.point_at(static_cast<std::int64_t>(
          rng.below(static_cast<std::uint64_t>(shape.total_size()))));
      smooth.deviation =
          std::max(smooth.deviation, std::abs(fourier::two_point_smooth(f, t, x, y) -
                                              fourier::two_point_smooth_spectral(coeffs, t, x, y)));
    }
    for (auto* rep : {&round, &parseval, &lap, &noise, &smooth}) {
      rep->cases_checked = per_shape;
      rep->holds = rep->deviation <= rep->tolerance;
      add_report(result, *rep);
    }
  }

  // Spectral smoothing identity and the orientation regrouping identity.
  const std::vector<std::vector<int>> small = {{3, 2}, {2, 2, 2}, {3, 3}, {2, 3, 2}};
  int idx = 0;
  for (int i = 0; i < options.corpus_size; ++i) {
    Rng rng = base.split(0xABCD + static_cast<std::uint64_t>(i));
    const GridShape shape(small[static_cast<std::size_t>(idx++) % small.size()]);
    const fourier::ComplexField f = fourier::ComplexField::random(shape, rng, true);
    const fourier::ComplexField g = fourier::ComplexField::random(shape, rng, false);
    const double t = (i % 2 == 0) ? 0.3 : 0.7;
    const double gamma = (i % 3 == 0) ? 0.0 : ((i % 3 == 1) ? 0.5 : 1.0);
    add_report(result, pisier::check_smoothing_identity(f, g, t, gamma));

    const Distribution ell = random_dirichlet(shape, 1.0, rng);
    const auto built = pisier::Orientation::from_edge_set(graphs::build_orientation(ell));
    add_report(result, pisier::check_orientation_grouping_identity(f, g, t, gamma, built));
    const auto random_orient = pisier::Orientation::random(shape, rng);
    add_report(result, pisier::check_orientation_grouping_identity(f, g, t, gamma, random_orient));
  }
}

void run_inequality_suite(SuiteResult& result, const SuiteOptions& options) {
  const int n_cal = std::max(20, options.corpus_size);
  const CalibratedConstants c =
      calibrate_constants(options.seed ^ 0xCA11B7A7ULL, n_cal, options.max_cells);

  Rng base(options.seed ^ 0x7E57C0DEULL);
  const auto& shapes = pisier_shapes();
  // Per-n monitored ratio trend.
  std::map<int, std::pair<double, int>> trend;
  for (int i = 0; i < n_cal; ++i) {
    Rng rng = base.split(static_cast<std::uint64_t>(i));
    const GridShape shape(shapes[static_cast<std::size_t>(i) % shapes.size()]);
    if (shape.total_size() > options.max_cells) continue;
    PisierInstance inst = make_pisier_instance(shape, rng, i % 2 == 1);
    const PisierRatios r = pisier_ratios(inst, rng, 10);

    VerificationReport plain{"plain_pisier_holdout", shape.to_string()};
    plain.lhs = r.plain;
    plain.rhs = c.pisier_plain;
    plain.ratio = VerificationReport::safe_ratio(plain.lhs, plain.rhs);
    plain.holds = plain.lhs <= plain.rhs;
    add_report(result, plain);

    VerificationReport robust{"robust_pisier_holdout", shape.to_string()};
    robust.lhs = std::max(r.robust_built, r.robust_random_max);
    robust.rhs = c.pisier_robust;
    robust.ratio = VerificationReport::safe_ratio(robust.lhs, robust.rhs);
    robust.holds = robust.lhs <= robust.rhs;
    add_report(result, robust);

    add_report(result, verify::check_tv_edge_bound(inst.ell, c.tv_edge));
    add_report(result, verify::check_outdegree_case_witness(
                           inst.ell, (c.case_witness > 0.0) ? 1.0 / c.case_witness : 1e9));

    // Log how the once-per-edge robust quantity compares with the
    // double-counted plain one (the lhs norm cancels in the ratio).
    VerificationReport mon{"robust_vs_plain_rhs", shape.to_string()};
    mon.lhs = pisier::robust_rhs(inst.f, 1.0, pisier::Orientation::from_edge_set(inst.graph));
    mon.rhs = pisier::plain_rhs(inst.f, 1.0);
    mon.ratio = VerificationReport::safe_ratio(mon.lhs, mon.rhs);
    mon.cases_checked = 1;
    add_report(result, mon, /*monitored=*/true);

    auto& [sum, count] = trend[shape.n()];
    sum += r.robust_built;
    ++count;
  }
  for (const auto& [n, agg] : trend) {
    VerificationReport mon{"robust_ratio_trend", "n=" + std::to_string(n)};
    mon.lhs = agg.first / std::max(1, agg.second);
    mon.cases_checked = agg.second;
    add_report(result, mon, /*monitored=*/true);
  }

  // Monitored: restriction bias mass against projection distance. The
  // analysis constants behind this comparison are not extractable, so the
  // ratio is reported, never asserted.
  Rng mon_rng(options.seed ^ 0x3A11BEEFULL);
  for (int i = 0; i < 5; ++i) {
    const GridShape shape({2, 2, 3});
    const Distribution p = random_dirichlet(shape, 0.6, mon_rng);
    const auto terms = verify::restriction_bias_expectation_terms(p, 1);
    VerificationReport mon{"restriction_bias_vs_projection_tv",
                           shape.to_string() + " t=1 alpha=" + std::to_string(terms.alpha)};
    mon.lhs = terms.bias_expectation;
    mon.rhs = terms.scaled_rhs;
    mon.ratio = VerificationReport::safe_ratio(mon.lhs, mon.rhs);
    mon.cases_checked = 1;
    add_report(result, mon, /*monitored=*/true);
  }
}

void run_lemma_suite(SuiteResult& result, const SuiteOptions& options) {
  Rng base(options.seed ^ 0x1E44A5ULL);
  const std::vector<std::vector<int>> shapes = {{2, 2, 2}, {3, 3}, {2, 3, 2}};
  const int per_shape = std::max(4, options.corpus_size / 4);

  for (const auto& dims : shapes) {
    const GridShape shape(dims);
    for (int i = 0; i < per_shape; ++i) {
      Rng rng = base.split(shape.total_size() * 1000 + static_cast<std::uint64_t>(i));
      const Distribution p = random_dirichlet(shape, 0.7, rng);

      add_report(result, verify::check_outdegree_edge_bound(p));
      add_report(result, verify::check_peel_indegree_property(p, rng, 25));
      const auto G = graphs::build_orientation(p);
      add_report(result, verify::audit_orientation(p, G));
      if (options.inject_fault && i == 0) {
        auto corrupted = graphs::corrupt_orientation_for_testing(G);
        VerificationReport rep = verify::audit_orientation(p, corrupted);
        rep.name = "orientation_audit_injected_fault";
        add_report(result, rep);
      }
      for (int t : {1, 2}) {
        if (t >= shape.n()) continue;
        add_report(result, verify::check_restriction_bias_edge_bound(p, t));
        add_report(result, verify::check_double_uneven_bias_witness(p, t));
        for (int kappa : {1, 2}) {
          for (double gamma : {1.0, 2.0}) {
            add_report(result, verify::check_bias_mixture_contraction(p, t, kappa, gamma));
          }
        }
      }
      // Restriction decomposition bound.
      for (double sigma : {0.25, 0.5, 0.75}) {
        const auto tv_rep = tv_decomposition_check(p, sigma);
        VerificationReport rep{"tv_restriction_decomposition",
                               shape.to_string() + " sigma=" + std::to_string(sigma)};
        rep.lhs = tv_rep.lhs;
        rep.rhs = tv_rep.rhs;
        rep.ratio = VerificationReport::safe_ratio(rep.lhs, rep.rhs);
        rep.tolerance = 1e-9;
        rep.holds = tv_rep.holds;
        rep.cases_checked = 1;
        add_report(result, rep);
      }
    }
  }
  // Projection bias lower bound on band-conditioned instances.
  const std::vector<std::vector<int>> band_shapes = {{2, 2}, {3, 3}, {2, 3}, {2, 2, 2}, {3, 3, 2}};
  for (int i = 0; i < std::max(10, options.corpus_size); ++i) {
    Rng rng = base.split(0xBA4D + static_cast<std::uint64_t>(i));
    const GridShape shape(band_shapes[static_cast<std::size_t>(i) % band_shapes.size()]);
    add_report(result, verify::check_projection_bias_lower_bound(random_band_instance(shape, rng)));
  }
}

}  // namespace

std::string SuiteResult::to_json() const {
  std::ostringstream os;
  os << "{\"suite\":\"" << suite << "\",\"seed\":" << seed
     << ",\"all_hard_pass\":" << (all_hard_pass ? "true" : "false") << ",\"reports\":[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) os << ',';
    os << reports[i].to_json();
  }
  os << "]}";
  return os.str();
}

SuiteResult run_verification(const SuiteOptions& options) {
  SuiteResult result;
  result.suite = options.suite;
  result.seed = options.seed;
  if (options.suite != "identities" && options.suite != "inequalities" &&
      options.suite != "lemmas" && options.suite != "all") {
    throw ArgumentError("run_verification: unknown suite \"" + options.suite + "\"");
  }
  if (options.suite == "identities" || options.suite == "all") {
    run_identity_suite(result, options);
  }
  if (options.suite == "inequalities" || options.suite == "all") {
    run_inequality_suite(result, options);
  }
  if (options.suite == "lemmas" || options.suite == "all") {
    run_lemma_suite(result, options);
  }
  return result;
}

bool SweepResult::within_sqrt_factor(double factor) const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double growth = rows[i].mean_queries / std::max(1.0, rows[i - 1].mean_queries);
    const double ideal =
        std::sqrt(static_cast<double>(rows[i].n) / static_cast<double>(rows[i - 1].n));
    if (growth > ideal * factor || growth < ideal / factor) return false;
  }
  return true;
}

std::string SweepResult::to_csv() const {
  std::ostringstream os;
  os << "# schema: hgut-sweep-v1\n";
  os << "n,d_tv,trials,rejects,mean_queries,p95_queries\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.d_tv << ',' << r.trials << ',' << r.rejects << ',' << r.mean_queries
       << ',' << r.p95_queries << '\n';
  }
  return os.str();
}

std::string SweepResult::to_json() const {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n},
                   {"d_tv", r.d_tv},
                   {"trials", r.trials},
                   {"rejects", r.rejects},
                   {"mean_queries", r.mean_queries},
                   {"p95_queries", r.p95_queries}});
  }
  return json{{"rows", arr}, {"sqrt_factor_2_5", within_sqrt_factor(2.5)}}.dump(2);
}

SweepResult run_sweep(const SweepOptions& options) {
  SweepResult result;
  for (std::size_t gi = 0; gi < options.n_grid.size(); ++gi) {
    const int n = options.n_grid[gi];
    if (options.num_biased > n) throw ArgumentError("run_sweep: num_biased > n");
    const GridShape shape(std::vector<int>(static_cast<std::size_t>(n), 2));
    const Distribution dist = io::make_generated(
        shape, "biased_coord",
        {{"num_biased", static_cast<double>(options.num_biased)}, {"mass0", options.mass0}},
        options.seed);
    SweepRow row;
    row.n = n;
    row.d_tv = annotated_tv(dist);
    row.trials = options.trials;
    const auto trials = run_trials(dist, options.eps, TesterConfig::practical(options.seed),
                                   options.trials, Rng(options.seed).split(gi).seed());
    std::vector<double> queries;
    for (const auto& t : trials) {
      row.rejects += (t.decision == Decision::Reject);
      queries.push_back(static_cast<double>(t.queries.total));
    }
    row.mean_queries =
        std::accumulate(queries.begin(), queries.end(), 0.0) / static_cast<double>(options.trials);
    row.p95_queries = percentile(queries, 0.95);
    result.rows.push_back(row);
  }
  if (!options.out_csv.empty()) io::write_text_file(options.out_csv, result.to_csv());
  return result;
}

}  // namespace hgut::harness
