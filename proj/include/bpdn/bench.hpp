// Benchmark harness: grids of generated instances run through the solver set,
// with CSV and SVG output.

#ifndef BPDN_BENCH_HPP
#define BPDN_BENCH_HPP

#include "bpdn/ensembles.hpp"
#include "bpdn/solvers.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace bpdn {

/// Support size of the built-in dynamic-range study: 50 nonzeros on 1000
/// measurements scaled down to 200 measurements.
inline constexpr Index kDynrangeSparsity = 10;

struct ExperimentConfig {
  std::string name;
  std::vector<EnsembleSpec> ensembles;  // seeds are taken from `seeds`
  std::vector<SolutionSpec> solutions;  // ditto
  std::vector<double> lambdas;
  std::vector<SolverConfig> solvers;    // tol and max_iter come from below
  std::vector<std::uint64_t> seeds;
  double tol = 1e-6;
  long max_iter = 20000;
  unsigned workers = 0;  // 0: hardware concurrency

  void validate() const;
};

enum class BenchStatus { Converged, MaxIter, CertificationFailed, NonFinite };

std::string_view to_string(BenchStatus status);

struct BenchRecord {
  std::string experiment;
  std::string instance_id;
  std::string solver;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  Index sparsity = 0;
  double dynamic_range = 0.0;  // NaN when certification failed before x* mattered
  double coherence = 0.0;
  long iterations = 0;
  double final_rel_error = 0.0;
  double wall_time = 0.0;
  BenchStatus status = BenchStatus::MaxIter;
};

struct BenchResult {
  BenchRecord record;
  SolverTrace trace;
};

/// Runs every (ensemble, solution, lambda, seed) cell against every solver.
/// Cells are executed by a bounded worker pool; the output order is the grid
/// order regardless of scheduling. A cell whose certification fails yields one
/// CertificationFailed record per solver.
std::vector<BenchResult> run_experiment(const ExperimentConfig& cfg);

/// The four built-in studies: lambda, sparsity, dynrange, coherence.
std::vector<std::string> builtin_experiment_names();
/// Throws std::invalid_argument for an unknown name.
ExperimentConfig builtin_experiment(const std::string& name);

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentConfig& cfg);
/// Throws std::runtime_error for unreadable or malformed JSON and
/// std::invalid_argument for a well-formed but invalid configuration.
ExperimentConfig load_experiment(const std::filesystem::path& path);

struct CsvPaths {
  std::filesystem::path summary;
  std::filesystem::path traces;
};

/// Writes summary.csv and traces.csv into `out_dir`. Wall time is a summary
/// column only when `include_timing` is set, so the default summary is a pure
/// function of the configuration.
CsvPaths emit_csv(const std::vector<BenchResult>& results, const std::filesystem::path& out_dir,
                  bool include_timing = false);

std::vector<std::string> summary_header(bool include_timing = false);
std::vector<std::string> trace_header();

/// Appends one trace CSV row per iteration record.
void write_trace_rows(std::ostream& os, const std::string& experiment,
                      const std::string& instance_id, const std::string& solver,
                      const SolverTrace& trace);

}  // namespace bpdn

#endif  // BPDN_BENCH_HPP
