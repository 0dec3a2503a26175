// hgut command-line interface.
//
// Verbs:
//   test    - run the uniformity tester on a distribution file
//   verify  - run the numerical verification suites
//   corpus  - generate annotated distribution corpora
//   sweep   - query-count scaling sweep over the biased product family
//
// Exit codes: 0 pass, 1 assertion failure, 2 usage error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hgut/dist_io.hpp"
#include "hgut/errors.hpp"
#include "hgut/harness.hpp"
#include "hgut/oracle.hpp"
#include "hgut/testers.hpp"

namespace {

int cmd_test(const std::string& dist_path, double eps, const std::string& mode, int trials,
             std::uint64_t seed, const std::string& out) {
  const hgut::Distribution dist = hgut::io::load_distribution_file(dist_path);
  const auto cfg = (mode == "theory") ? hgut::testers::TesterConfig::theory(seed)
                                      : hgut::testers::TesterConfig::practical(seed);
  const auto rows = hgut::harness::run_trials(dist, eps, cfg, trials, seed);
  std::string text;
  if (out.size() >= 5 && out.substr(out.size() - 5) == ".json") {
    text = hgut::harness::trials_to_json(rows) + "\n";
  } else {
    text = hgut::harness::trials_to_csv(rows);
  }
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    hgut::io::write_text_file(out, text);
  }
  int accepts = 0;
  for (const auto& r : rows) accepts += (r.decision == hgut::testers::Decision::Accept);
  std::cerr << "accepted " << accepts << "/" << trials << " trials\n";
  return 0;
}

int cmd_verify(const hgut::harness::SuiteOptions& options, const std::string& out) {
  const auto result = hgut::harness::run_verification(options);
  const std::string text = result.to_json() + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    hgut::io::write_text_file(out, text);
  }
  int failed = 0;
  for (const auto& r : result.reports) failed += !r.holds;
  std::cerr << result.reports.size() << " checks, " << failed << " failed\n";
  return result.all_hard_pass ? 0 : 1;
}

int cmd_corpus(const hgut::harness::CorpusOptions& options) {
  const auto files = hgut::harness::generate_corpus(options);
  for (const auto& f : files) {
    std::cout << f.path << " d_tv=" << f.d_tv << "\n";
  }
  return 0;
}

int cmd_sweep(hgut::harness::SweepOptions options, const std::string& out_json) {
  const auto result = hgut::harness::run_sweep(options);
  std::cout << result.to_csv();
  if (!out_json.empty()) hgut::io::write_text_file(out_json, result.to_json() + "\n");
  std::cerr << "sqrt-growth within factor 2.5: "
            << (result.within_sqrt_factor(2.5) ? "yes" : "no") << " (monitored)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniformity testing over hypergrids under subcube conditioning"};
  app.require_subcommand(1);

  // test
  auto* test = app.add_subcommand("test", "Run the uniformity tester on a distribution file");
  std::string dist_path, mode = "practical", test_out;
  double eps = 0.25;
  int trials = 1;
  std::uint64_t seed = 1;
  test->add_option("--dist", dist_path, "Distribution JSON file")->required();
  test->add_option("--eps", eps, "Distance parameter in (0, 1/2]");
  test->add_option("--mode", mode, "theory|practical")
      ->check(CLI::IsMember({"theory", "practical"}));
  test->add_option("--trials", trials, "Independent seeded trials");
  test->add_option("--seed", seed, "Base seed");
  test->add_option("--out", test_out, "Output path (.csv or .json); '-' for stdout");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the numerical verification suites");
  hgut::harness::SuiteOptions suite_options;
  std::string verify_out;
  verify->add_option("--suite", suite_options.suite, "identities|inequalities|lemmas|all")
      ->check(CLI::IsMember({"identities", "inequalities", "lemmas", "all"}));
  verify->add_option("--seed", suite_options.seed, "Base seed");
  verify->add_option("--corpus-size", suite_options.corpus_size, "Instances per family");
  verify->add_option("--max-cells", suite_options.max_cells, "Largest grid (cells)");
  verify->add_flag("--inject-fault", suite_options.inject_fault,
                   "Corrupt one orientation to confirm the auditors catch it");
  verify->add_option("--out", verify_out, "JSON report path; '-' for stdout");

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Generate annotated distribution files");
  hgut::harness::CorpusOptions corpus_options;
  std::vector<double> corpus_params;
  std::vector<std::string> corpus_param_names;
  corpus->add_option("--kind", corpus_options.kind,
                     "uniform|dirichlet|biased_coord|heavy_atom|perturbed_uniform|product_biased")
      ->required();
  corpus->add_option("--shape", corpus_options.shape, "Grid sides m_1 ... m_n")->required();
  corpus->add_option("--count", corpus_options.count, "Number of files");
  corpus->add_option("--floor", corpus_options.floor, "Minimum annotated d_TV");
  corpus->add_option("--seed", corpus_options.seed, "Base seed");
  corpus->add_option("--outdir", corpus_options.outdir, "Output directory")->required();
  corpus->add_option("--param", corpus_param_names,
                     "Generator parameter as name=value (repeatable)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Query scaling sweep on the biased product family");
  hgut::harness::SweepOptions sweep_options;
  std::string sweep_json;
  sweep->add_option("--n", sweep_options.n_grid, "Dimensions to sweep");
  sweep->add_option("--biased", sweep_options.num_biased, "Number of biased coordinates");
  sweep->add_option("--mass0", sweep_options.mass0, "Mass on symbol 0 of biased coordinates");
  sweep->add_option("--eps", sweep_options.eps, "Distance parameter");
  sweep->add_option("--trials", sweep_options.trials, "Trials per dimension");
  sweep->add_option("--seed", sweep_options.seed, "Base seed");
  sweep->add_option("--out", sweep_options.out_csv, "CSV output path");
  sweep->add_option("--out-json", sweep_json, "JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*test) return cmd_test(dist_path, eps, mode, trials, seed, test_out);
    if (*verify) return cmd_verify(suite_options, verify_out);
    if (*corpus) {
      for (const auto& kv : corpus_param_names) {
        const auto pos = kv.find('=');
        if (pos == std::string::npos) {
          std::cerr << "bad --param (want name=value): " << kv << "\n";
          return 2;
        }
        corpus_options.params[kv.substr(0, pos)] = std::stod(kv.substr(pos + 1));
      }
      return cmd_corpus(corpus_options);
    }
    if (*sweep) return cmd_sweep(sweep_options, sweep_json);
  } catch (const hgut::ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
