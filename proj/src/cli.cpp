#include "bpdn/cli.hpp"

#include "bpdn/bench.hpp"
#include "bpdn/certgen.hpp"
#include "bpdn/csv.hpp"
#include "bpdn/instance_io.hpp"
#include "bpdn/solvers.hpp"
#include "bpdn/svg_plot.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>

namespace bpdn::cli {

namespace {

constexpr double kVerifyBound = 1e-8;

const char* kFooter =
    "Exit codes:\n"
    "  0  success\n"
    "  1  bad flags or unknown experiment\n"
    "  2  no certificate exists for the requested sign pattern\n"
    "  3  input file could not be parsed\n"
    "  4  optimality residual above 1e-8, or file fails the tamper check\n"
    "  5  solver hit --max-iter before reaching --tol";

struct GenArgs {
  std::string ensemble;
  Index n = 0, k = 0, sparsity = 0, K = 1;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> dynrange;
  std::string law;
  std::string method = "auto";
  std::string out;
};

struct SolveArgs {
  std::string path;
  std::string solver = "Fista";
  double tol = 1e-6;
  long max_iter = 100000;
  std::optional<double> continuation;
  std::string trace;
};

struct BenchArgs {
  std::string experiment;
  std::string config;
  std::string out;
  std::vector<std::uint64_t> seeds;
  std::optional<long> max_iter;
  unsigned workers = 0;
  bool timing = false;
};

struct PlotArgs {
  std::string trace;
  std::string out;
};

CertStrategy parse_strategy(const std::string& m) {
  if (m == "auto") return CertStrategy::Auto;
  if (m == "pocs") return CertStrategy::Pocs;
  if (m == "qp") return CertStrategy::QuadProg;
  throw std::invalid_argument("--method must be pocs, qp or auto");
}

int cmd_gen(const GenArgs& a, std::ostream& out, std::ostream& err) {
  EnsembleSpec ens;
  SolutionSpec sol;
  CertStrategy strategy;
  try {
    ens = EnsembleSpec{parse_ensemble_kind(a.ensemble), a.n, a.k, a.K, a.seed};
    sol.sparsity = a.sparsity;
    sol.seed = a.seed;
    if (!a.law.empty()) sol.law = parse_magnitude_law(a.law);
    else if (a.dynrange) sol.law = MagnitudeLaw::LogUniformDynamicRange;
    if (a.dynrange) sol.theta = *a.dynrange;
    if (!(a.lambda > 0)) throw std::invalid_argument("--lambda must be > 0");
    strategy = parse_strategy(a.method);
    ens.validate();
    sol.validate(ens.n);
  } catch (const std::invalid_argument& e) {
    err << "gen: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  }

  Instance inst;
  try {
    inst = generate_instance(ens, sol, a.lambda, strategy);
  } catch (const CertificationError& e) {
    err << "gen: " << e.what() << '\n';
    return kInfeasible;
  }
  save_instance(inst, a.out);
  out << "wrote " << a.out << ": n=" << inst.n() << " k=" << inst.k()
      << " certificate=" << to_string(inst.certificate.method)
      << " optimality_residual=" << inst.optimality_residual << '\n';
  return kOk;
}

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  Instance inst;
  try {
    inst = load_instance(path);
  } catch (const InstanceParseError& e) {
    err << "verify: " << e.what() << '\n';
    return kParse;
  } catch (const TamperError& e) {
    err << "verify: " << path << ": " << e.what() << '\n';
    return kResidual;
  }
  const EquivalentParameters eq = equivalent_parameters(inst);
  out << std::setprecision(6) << "optimality_residual " << inst.optimality_residual << '\n'
      << "range_residual " << range_residual(inst.A, inst.certificate) << '\n'
      << "sign_residual "
      << sign_residual(SignPattern::from_vector(inst.x_star), inst.certificate.w) << '\n'
      << "sigma " << std::setprecision(17) << eq.sigma << '\n'
      << "tau " << eq.tau << '\n';
  if (!(inst.optimality_residual <= kVerifyBound)) {
    err << "verify: optimality residual above " << kVerifyBound << '\n';
    return kResidual;
  }
  return kOk;
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  SolverConfig cfg;
  try {
    cfg.kind = parse_solver_kind(a.solver);
    cfg.tol_rel_error = a.tol;
    cfg.max_iter = a.max_iter;
    cfg.continuation_factor = a.continuation;
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    err << "solve: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  }
  Instance inst;
  try {
    inst = load_instance(a.path);
  } catch (const InstanceParseError& e) {
    err << "solve: " << e.what() << '\n';
    return kParse;
  } catch (const TamperError& e) {
    err << "solve: " << a.path << ": " << e.what() << '\n';
    return kResidual;
  }

  SolveResult res;
  try {
    res = solve(inst, cfg);
  } catch (const NonFiniteIterate& e) {
    err << "solve: " << e.what() << '\n';
    return kMaxIter;
  }
  if (!a.trace.empty()) {
    std::ofstream os(a.trace, std::ios::binary);
    if (!os) {
      err << "solve: cannot write " << a.trace << '\n';
      return kUsage;
    }
    csv::write_row(os, trace_header());
    write_trace_rows(os, "solve", std::filesystem::path(a.path).stem().string(),
                     std::string(to_string(cfg.kind)), res.trace);
  }
  out << std::setprecision(6) << to_string(cfg.kind) << ": iterations "
      << res.trace.iterations() << ", rel_error " << res.trace.final_rel_error()
      << ", objective " << std::setprecision(17) << objective(inst, res.x) << ", "
      << to_string(res.trace.status) << '\n';
  return res.trace.status == SolveStatus::Converged ? kOk : kMaxIter;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = a.config.empty() ? builtin_experiment(a.experiment) : load_experiment(a.config);
    if (!a.seeds.empty()) cfg.seeds = a.seeds;
    if (a.max_iter) cfg.max_iter = *a.max_iter;
    if (a.workers) cfg.workers = a.workers;
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    err << "bench: " << e.what() << '\n';
    return kUsage;
  } catch (const std::runtime_error& e) {
    err << "bench: " << e.what() << '\n';
    return kParse;
  }
  const std::vector<BenchResult> results = run_experiment(cfg);
  const CsvPaths paths = emit_csv(results, a.out, a.timing);
  const auto svgs = plot_convergence(paths.traces, a.out);
  const auto failed = std::count_if(results.begin(), results.end(), [](const BenchResult& r) {
    return r.record.status == BenchStatus::CertificationFailed;
  });
  out << "wrote " << paths.summary.string() << ", " << paths.traces.string() << " and "
      << svgs.size() << " plots (" << results.size() << " records, " << failed
      << " certification failures)\n";
  return kOk;
}

int cmd_plot(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::filesystem::path> written;
  try {
    written = plot_convergence(a.trace, a.out);
  } catch (const std::runtime_error& e) {
    err << "plot: " << e.what() << '\n';
    return kParse;
  }
  for (const auto& p : written) out << p.string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generate and solve l1-regularized least-squares instances with known minimizers",
               "bpdn"};
  app.footer(kFooter);
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance with a certified minimizer");
  g->add_option("--ensemble", gen.ensemble, "dct | bernoulli | threebases | banded")->required();
  g->add_option("--n", gen.n, "Number of variables (columns)")->required();
  g->add_option("--k", gen.k, "Number of measurements (rows)")->required();
  g->add_option("--sparsity", gen.sparsity, "Nonzeros of x*")->required();
  g->add_option("--lambda", gen.lambda, "Regularization parameter")->required();
  g->add_option("--seed", gen.seed, "Seed for matrix, support, signs and magnitudes")->required();
  g->add_option("--K", gen.K, "Band width for the banded ensemble");
  g->add_option("--dynrange", gen.dynrange, "Target dynamic range of x* (log-uniform law)");
  g->add_option("--law", gen.law, "Magnitude law: gaussian | loguniform | sign");
  g->add_option("--method", gen.method, "Certificate method: pocs | qp | auto")
      ->capture_default_str();
  g->add_option("--out", gen.out, "Output instance file")->required();

  std::string verify_path;
  auto* v = app.add_subcommand("verify", "Check the optimality of x* in an instance file");
  v->add_option("path", verify_path, "Instance file")->required();

  SolveArgs sv;
  auto* s = app.add_subcommand("solve", "Run a solver until ||x - x*|| / ||x*|| <= tol");
  s->add_option("path", sv.path, "Instance file")->required();
  s->add_option("--solver", sv.solver, "Ista | Fista | Gpsr | Admm")->capture_default_str();
  s->add_option("--tol", sv.tol, "Relative error target")->capture_default_str();
  s->add_option("--max-iter", sv.max_iter, "Iteration cap")->capture_default_str();
  s->add_option("--continuation", sv.continuation, "Ista lambda continuation factor in (0,1)");
  s->add_option("--trace", sv.trace, "Write the per-iteration trace CSV here");

  BenchArgs bn;
  auto* b = app.add_subcommand("bench", "Run an experiment grid; write CSVs and SVG plots");
  auto* exp_opt = b->add_option("--experiment", bn.experiment,
                                "Built-in experiment: lambda | sparsity | dynrange | coherence");
  auto* cfg_opt = b->add_option("--config", bn.config, "Experiment JSON file");
  exp_opt->excludes(cfg_opt);
  b->add_option("--out", bn.out, "Output directory")->required();
  b->add_option("--seeds", bn.seeds, "Override the seed list");
  b->add_option("--max-iter", bn.max_iter, "Override the iteration cap");
  b->add_option("--workers", bn.workers, "Worker threads (0: one per core)");
  b->add_flag("--timing", bn.timing, "Add a wall-time column to summary.csv");

  PlotArgs pl;
  auto* p = app.add_subcommand("plot", "Render SVG convergence plots from a trace CSV");
  p->add_option("--trace", pl.trace, "Trace CSV")->required();
  p->add_option("--out", pl.out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (b->parsed() && bn.experiment.empty() && bn.config.empty())
      throw CLI::RequiredError("bench needs --experiment or --config");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen, out, err);
    if (v->parsed()) return cmd_verify(verify_path, out, err);
    if (s->parsed()) return cmd_solve(sv, out, err);
    if (b->parsed()) return cmd_bench(bn, out, err);
    return cmd_plot(pl, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace bpdn::cli
