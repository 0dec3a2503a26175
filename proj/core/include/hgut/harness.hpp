#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hgut/distribution.hpp"
#include "hgut/report.hpp"
#include "hgut/testers.hpp"

namespace hgut::harness {

/// Worker cap: HGUT_THREADS when set (>= 1), else hardware concurrency.
int thread_cap();

/// Index-parallel loop; results must be written to disjoint slots. Order of
/// execution is unspecified, outputs are position-stable.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

struct TrialResult {
  int trial = 0;
  testers::Decision decision = testers::Decision::Accept;
  LedgerSnapshot queries;
  int depth_max = 0;
  double wall_ms = 0.0;
};

/// Independent seeded tester invocations (one oracle + generator per trial).
std::vector<TrialResult> run_trials(const Distribution& dist, double eps,
                                    const testers::TesterConfig& cfg, int trials,
                                    std::uint64_t seed);

std::string trials_to_csv(const std::vector<TrialResult>& rows);
std::string trials_to_json(const std::vector<TrialResult>& rows);

struct ExperimentSpec {
  std::string name;
  std::string generator;  // io generator name
  std::map<std::string, double> params;
  std::vector<std::vector<int>> shapes;
  std::vector<double> eps_grid;
  int trials = 1;
  testers::Mode mode = testers::Mode::Practical;
  std::uint64_t seed = 0;
  std::string out_path;  // optional; .csv or .json
  // Optional assertions; negative disables.
  double min_accept_rate = -1.0;
  double min_reject_rate = -1.0;
};

struct ResultRow {
  std::string experiment;
  std::string shape;
  double eps = 0.0;
  int accept_count = 0;
  int trials = 0;
  double mean_queries = 0.0;
  double p95_queries = 0.0;
  double wall_ms = 0.0;
};

struct ExperimentOutcome {
  std::vector<ResultRow> rows;
  bool assertions_pass = true;
};

ExperimentOutcome run_experiment(const ExperimentSpec& spec);
std::string rows_to_csv(const std::vector<ResultRow>& rows);

struct CorpusOptions {
  std::string kind;  // uniform|dirichlet|biased_coord|heavy_atom|perturbed_uniform|product_biased
  std::vector<int> shape;
  std::map<std::string, double> params;
  int count = 1;
  double floor = 0.0;  // minimum annotated d_TV for far kinds
  std::uint64_t seed = 0;
  std::string outdir;
};

struct CorpusFileInfo {
  std::string path;
  double d_tv = 0.0;
};

/// Deterministic corpus files with exact d_TV annotations; instances below
/// the floor are regenerated from follow-on seeds.
std::vector<CorpusFileInfo> generate_corpus(const CorpusOptions& options);

/// Exact d_TV to uniform for corpus distributions. Product forms whose
/// non-uniform marginals span too large a block raise CapacityError.
double annotated_tv(const Distribution& p);

struct SuiteOptions {
  std::string suite = "all";  // identities | inequalities | lemmas | all
  std::uint64_t seed = 1;
  int corpus_size = 20;
  std::int64_t max_cells = 48;
  bool inject_fault = false;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<verify::VerificationReport> reports;
  bool all_hard_pass = true;
  std::string to_json() const;
};

/// Seeded verification battery. Hard assertions decide the exit status;
/// monitored ratios are reported but never fail the run.
SuiteResult run_verification(const SuiteOptions& options);

/// Calibration of the inequality constants on a seeded corpus: the constant
/// is 1.25x the worst observed ratio, then asserted on disjoint instances.
struct CalibratedConstants {
  double pisier_plain = 0.0;
  double pisier_robust = 0.0;
  double tv_edge = 0.0;
  double case_witness = 0.0;  // upper bound on 1/witness
};
CalibratedConstants calibrate_constants(std::uint64_t seed, int instances,
                                        std::int64_t max_cells);

struct SweepOptions {
  std::vector<int> n_grid{16, 64, 256};
  int num_biased = 8;
  double mass0 = 0.75;
  double eps = 0.4;
  int trials = 10;
  std::uint64_t seed = 7;
  std::string out_csv;
};

struct SweepRow {
  int n = 0;
  double d_tv = 0.0;
  int trials = 0;
  int rejects = 0;
  double mean_queries = 0.0;
  double p95_queries = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Monitored: consecutive mean-query ratios against sqrt(n) growth.
  bool within_sqrt_factor(double factor) const;
  std::string to_csv() const;
  std::string to_json() const;
};

SweepResult run_sweep(const SweepOptions& options);

}  // namespace hgut::harness
