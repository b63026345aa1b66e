#include "bpdn/bench.hpp"

#include "bpdn/certgen.hpp"
#include "bpdn/csv.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

namespace bpdn {

std::string_view to_string(BenchStatus status) {
  switch (status) {
    case BenchStatus::Converged: return "Converged";
    case BenchStatus::MaxIter: return "MaxIter";
    case BenchStatus::CertificationFailed: return "CertificationFailed";
    case BenchStatus::NonFinite: return "NonFinite";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (ensembles.empty() || solutions.empty() || lambdas.empty() || solvers.empty() ||
      seeds.empty())
    throw std::invalid_argument("experiment '" + name + "': every grid must be nonempty");
  if (!(tol > 0) || max_iter < 1)
    throw std::invalid_argument("experiment '" + name + "': need tol > 0 and max_iter >= 1");
  for (double lam : lambdas)
    if (!(lam > 0)) throw std::invalid_argument("experiment '" + name + "': lambda must be > 0");
  for (const auto& e : ensembles) {
    e.validate();
    for (const auto& s : solutions) s.validate(e.n);
  }
  for (auto s : solvers) {
    s.tol_rel_error = tol;
    s.max_iter = max_iter;
    s.validate();
  }
}

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string short_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::PartialDCT: return "dct";
    case EnsembleKind::Bernoulli: return "bernoulli";
    case EnsembleKind::ThreeBasesUnion: return "threebases";
    case EnsembleKind::BandedCoherent: return "banded";
  }
  return "?";
}

std::string instance_id(const EnsembleSpec& e, const SolutionSpec& s, double lambda,
                        std::uint64_t seed, double mu) {
  std::string id = "ens=" + short_name(e.kind) + ";n=" + std::to_string(e.n) +
                   ";k=" + std::to_string(e.k);
  if (e.kind == EnsembleKind::BandedCoherent) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", mu);
    id += ";K=" + std::to_string(e.K) + ";mu=" + buf;
  }
  id += ";s=" + std::to_string(s.sparsity);
  if (s.law == MagnitudeLaw::LogUniformDynamicRange) id += ";theta=" + short_number(s.theta);
  id += ";lambda=" + short_number(lambda) + ";seed=" + std::to_string(seed);
  return id;
}

struct Job {
  EnsembleSpec ensemble;
  SolutionSpec solution;
  std::uint64_t seed;
};

// One job covers every lambda for a (matrix, solution) draw, since the
// certificate does not depend on lambda.
std::vector<BenchResult> run_job(const ExperimentConfig& cfg, const Job& job) {
  std::vector<BenchResult> out;
  const MatrixXd A = build_matrix(job.ensemble);
  const double mu = coherence(A);
  const SignPattern pattern = SignPattern::random(job.ensemble.n, job.solution.sparsity,
                                                  job.solution.seed);
  const VectorXd x_star = build_solution(job.solution, pattern);
  const double theta = dynamic_range(x_star);

  std::optional<Certificate> cert;
  try {
    cert = certify(A, pattern, CertStrategy::Auto);
  } catch (const CertificationError&) {
  }

  for (double lambda : cfg.lambdas) {
    BenchRecord base;
    base.experiment = cfg.name;
    base.instance_id = instance_id(job.ensemble, job.solution, lambda, job.seed, mu);
    base.seed = job.seed;
    base.lambda = lambda;
    base.sparsity = job.solution.sparsity;
    base.dynamic_range = theta;
    base.coherence = mu;

    if (!cert) {
      for (const auto& s : cfg.solvers) {
        BenchResult r{base, {}};
        r.record.solver = std::string(to_string(s.kind));
        r.record.status = BenchStatus::CertificationFailed;
        r.record.final_rel_error = std::numeric_limits<double>::quiet_NaN();
        out.push_back(std::move(r));
      }
      continue;
    }

    const Instance inst = assemble_instance(A, pattern, x_star, lambda, *cert,
                                            InstanceMeta{job.ensemble, job.solution});
    for (auto scfg : cfg.solvers) {
      scfg.tol_rel_error = cfg.tol;
      scfg.max_iter = cfg.max_iter;
      BenchResult r{base, {}};
      r.record.solver = std::string(to_string(scfg.kind));
      const auto start = std::chrono::steady_clock::now();
      try {
        SolveResult res = solve(inst, scfg);
        r.trace = std::move(res.trace);
        r.record.status = r.trace.status == SolveStatus::Converged ? BenchStatus::Converged
                                                                   : BenchStatus::MaxIter;
        r.record.iterations = r.trace.iterations();
        r.record.final_rel_error = r.trace.final_rel_error();
      } catch (const NonFiniteIterate&) {
        r.record.status = BenchStatus::NonFinite;
        r.record.final_rel_error = std::numeric_limits<double>::quiet_NaN();
      }
      r.record.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace

std::vector<BenchResult> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<Job> jobs;
  for (const auto& e : cfg.ensembles)
    for (const auto& s : cfg.solutions)
      for (std::uint64_t seed : cfg.seeds) {
        Job job{e, s, seed};
        job.ensemble.seed = seed;
        job.solution.seed = seed;
        jobs.push_back(job);
      }

  std::vector<std::vector<BenchResult>> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        slots[i] = run_job(cfg, jobs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  // Grid order: ensemble, solution, lambda, seed, then solver.
  std::vector<BenchResult> results;
  const std::size_t per_seed = cfg.seeds.size();
  for (std::size_t block = 0; block < jobs.size(); block += per_seed)
    for (std::size_t l = 0; l < cfg.lambdas.size(); ++l)
      for (std::size_t s = 0; s < per_seed; ++s)
        for (std::size_t v = 0; v < cfg.solvers.size(); ++v)
          results.push_back(std::move(slots[block + s][l * cfg.solvers.size() + v]));
  return results;
}

std::vector<std::string> builtin_experiment_names() {
  return {"lambda", "sparsity", "dynrange", "coherence"};
}

ExperimentConfig builtin_experiment(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.seeds = {1};
  for (SolverKind k : kAllSolvers) {
    SolverConfig s;
    s.kind = k;
    cfg.solvers.push_back(s);
  }
  if (name == "lambda") {
    cfg.ensembles = {{EnsembleKind::PartialDCT, 1000, 200, 1, 0}};
    cfg.solutions = {{20, MagnitudeLaw::GaussianMagnitude, 1.0, 0}};
    cfg.lambdas = {1e-1, 1e-2, 1e-4};
  } else if (name == "sparsity") {
    cfg.ensembles = {{EnsembleKind::Bernoulli, 2000, 200, 1, 0}};
    cfg.solutions = {{4, MagnitudeLaw::GaussianMagnitude, 1.0, 0},
                     {80, MagnitudeLaw::GaussianMagnitude, 1.0, 0}};
    cfg.lambdas = {1e-1};
  } else if (name == "dynrange") {
    cfg.ensembles = {{EnsembleKind::ThreeBasesUnion, 600, 200, 1, 0}};
    cfg.solutions = {{kDynrangeSparsity, MagnitudeLaw::LogUniformDynamicRange, 9.0, 0},
                     {kDynrangeSparsity, MagnitudeLaw::LogUniformDynamicRange, 701.0, 0},
                     {kDynrangeSparsity, MagnitudeLaw::LogUniformDynamicRange, 55000.0, 0}};
    cfg.lambdas = {1e-1};
  } else if (name == "coherence") {
    for (Index K : {5, 40, 100, 300})
      cfg.ensembles.push_back({EnsembleKind::BandedCoherent, 300, 300, K, 0});
    cfg.solutions = {{30, MagnitudeLaw::UnitMagnitude, 1.0, 0}};
    cfg.lambdas = {1e-1};
  } else {
    std::string names;
    for (const auto& n : builtin_experiment_names()) names += (names.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown experiment '" + name + "' (valid: " + names + ")");
  }
  return cfg;
}

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.name = j.at("name").get<std::string>();
  for (const auto& e : j.at("ensembles")) {
    EnsembleSpec spec;
    spec.kind = parse_ensemble_kind(e.at("kind").get<std::string>());
    spec.n = e.at("n").get<Index>();
    spec.k = e.at("k").get<Index>();
    spec.K = e.value("K", Index{1});
    cfg.ensembles.push_back(spec);
  }
  for (const auto& s : j.at("solutions")) {
    SolutionSpec spec;
    spec.sparsity = s.at("sparsity").get<Index>();
    spec.law = parse_magnitude_law(s.value("law", std::string("gaussian")));
    spec.theta = s.value("theta", 1.0);
    cfg.solutions.push_back(spec);
  }
  cfg.lambdas = j.at("lambdas").get<std::vector<double>>();
  if (j.contains("solvers")) {
    for (const auto& s : j.at("solvers")) {
      SolverConfig sc;
      if (s.is_string()) {
        sc.kind = parse_solver_kind(s.get<std::string>());
      } else {
        sc.kind = parse_solver_kind(s.at("kind").get<std::string>());
        if (s.contains("continuation_factor"))
          sc.continuation_factor = s.at("continuation_factor").get<double>();
        sc.admm_rho = s.value("admm_rho", sc.admm_rho);
        sc.bb_min = s.value("bb_min", sc.bb_min);
        sc.bb_max = s.value("bb_max", sc.bb_max);
      }
      cfg.solvers.push_back(sc);
    }
  } else {
    for (SolverKind k : kAllSolvers) {
      SolverConfig sc;
      sc.kind = k;
      cfg.solvers.push_back(sc);
    }
  }
  cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  cfg.tol = j.value("tol", cfg.tol);
  cfg.max_iter = j.value("max_iter", cfg.max_iter);
  cfg.workers = j.value("workers", 0u);
  cfg.validate();
  return cfg;
}

nlohmann::json experiment_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["name"] = cfg.name;
  j["ensembles"] = nlohmann::json::array();
  for (const auto& e : cfg.ensembles)
    j["ensembles"].push_back({{"kind", short_name(e.kind)}, {"n", e.n}, {"k", e.k}, {"K", e.K}});
  j["solutions"] = nlohmann::json::array();
  for (const auto& s : cfg.solutions)
    j["solutions"].push_back(
        {{"sparsity", s.sparsity}, {"law", std::string(to_string(s.law))}, {"theta", s.theta}});
  j["lambdas"] = cfg.lambdas;
  j["solvers"] = nlohmann::json::array();
  for (const auto& s : cfg.solvers) {
    nlohmann::json sj = {{"kind", std::string(to_string(s.kind))},
                         {"admm_rho", s.admm_rho},
                         {"bb_min", s.bb_min},
                         {"bb_max", s.bb_max}};
    if (s.continuation_factor) sj["continuation_factor"] = *s.continuation_factor;
    j["solvers"].push_back(sj);
  }
  j["seeds"] = cfg.seeds;
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  return j;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return experiment_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::vector<std::string> summary_header(bool include_timing) {
  std::vector<std::string> h = {"experiment", "instance_id",   "solver",     "seed",
                                "lambda",     "sparsity",      "dynamic_range", "coherence",
                                "iterations", "final_rel_error"};
  if (include_timing) h.push_back("wall_time_s");
  h.push_back("status");
  return h;
}

std::vector<std::string> trace_header() {
  return {"experiment", "instance_id", "solver", "iter", "rel_error", "objective", "elapsed_s"};
}

void write_trace_rows(std::ostream& os, const std::string& experiment,
                      const std::string& instance_id, const std::string& solver,
                      const SolverTrace& trace) {
  for (const auto& t : trace.records)
    csv::write_row(os, {experiment, instance_id, solver, std::to_string(t.iter),
                        csv::format_number(t.rel_error), csv::format_number(t.objective),
                        csv::format_number(t.elapsed)});
}

CsvPaths emit_csv(const std::vector<BenchResult>& results, const std::filesystem::path& out_dir,
                  bool include_timing) {
  std::filesystem::create_directories(out_dir);
  CsvPaths paths{out_dir / "summary.csv", out_dir / "traces.csv"};

  std::ofstream summary(paths.summary, std::ios::binary);
  if (!summary) throw std::runtime_error("cannot write " + paths.summary.string());
  csv::write_row(summary, summary_header(include_timing));
  for (const auto& r : results) {
    const BenchRecord& rec = r.record;
    csv::Row row = {rec.experiment,
                    rec.instance_id,
                    rec.solver,
                    std::to_string(rec.seed),
                    csv::format_number(rec.lambda),
                    std::to_string(rec.sparsity),
                    csv::format_number(rec.dynamic_range),
                    csv::format_number(rec.coherence),
                    std::to_string(rec.iterations),
                    csv::format_number(rec.final_rel_error)};
    if (include_timing) row.push_back(csv::format_number(rec.wall_time));
    row.push_back(std::string(to_string(rec.status)));
    csv::write_row(summary, row);
  }
  if (!summary) throw std::runtime_error("write failed: " + paths.summary.string());

  std::ofstream traces(paths.traces, std::ios::binary);
  if (!traces) throw std::runtime_error("cannot write " + paths.traces.string());
  csv::write_row(traces, trace_header());
  for (const auto& r : results)
    write_trace_rows(traces, r.record.experiment, r.record.instance_id, r.record.solver, r.trace);
  if (!traces) throw std::runtime_error("write failed: " + paths.traces.string());
  return paths;
}

}  // namespace bpdn
