// Iterative solvers for min_x 1/2 ||Ax - b||^2 + lambda ||x||_1.
//
// One representative per algorithm class: iterative soft thresholding (with
// optional lambda continuation), FISTA, gradient projection on the split
// x = u - v with Barzilai-Borwein steps, and ADMM. Every solver ignores its
// native stopping test and stops once ||x_n - x*|| / ||x*|| <= tol_rel_error,
// where x* is the certified minimizer carried by the instance.

#ifndef BPDN_SOLVERS_HPP
#define BPDN_SOLVERS_HPP

#include "bpdn/certgen.hpp"
#include "bpdn/linalg.hpp"

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace bpdn {

/// Componentwise sign(x_i) max(|x_i| - theta, 0).
template <typename Derived>
typename Derived::PlainObject soft_threshold(const Eigen::MatrixBase<Derived>& x,
                                             typename Derived::Scalar theta) {
  using Scalar = typename Derived::Scalar;
  if (theta < Scalar(0)) throw std::invalid_argument("soft_threshold: theta must be >= 0");
  typename Derived::PlainObject out = x;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const Scalar xi = out(i);
    const Scalar mag = std::abs(xi) - theta;
    out(i) = mag > Scalar(0) ? (xi > Scalar(0) ? mag : -mag) : Scalar(0);
  }
  return out;
}

inline double soft_threshold(double x, double theta) {
  if (theta < 0) throw std::invalid_argument("soft_threshold: theta must be >= 0");
  const double mag = std::abs(x) - theta;
  return mag > 0 ? (x > 0 ? mag : -mag) : 0.0;
}

enum class SolverKind { Ista, Fista, Gpsr, Admm };

inline constexpr SolverKind kAllSolvers[] = {SolverKind::Ista, SolverKind::Fista,
                                             SolverKind::Gpsr, SolverKind::Admm};

std::string_view to_string(SolverKind kind);
/// Accepts "Ista" and "ista" style spellings.
SolverKind parse_solver_kind(std::string_view name);

struct SolverConfig {
  SolverKind kind = SolverKind::Fista;
  double tol_rel_error = 1e-6;
  long max_iter = 100000;
  /// Ista only: geometric lambda schedule from 0.9 ||A^T b||_inf down to lambda.
  std::optional<double> continuation_factor;
  double admm_rho = 1.0;
  double bb_min = 1e-30;
  double bb_max = 1e30;

  void validate() const;
};

enum class SolveStatus { Converged, MaxIter };

std::string_view to_string(SolveStatus status);

struct TraceRecord {
  long iter;
  double rel_error;
  double objective;
  double elapsed;  // seconds since the solve started
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  SolveStatus status = SolveStatus::MaxIter;
  /// Admm only: ||x_n - z_n|| at the last iteration.
  double admm_primal_residual = 0.0;

  long iterations() const { return records.empty() ? 0 : records.back().iter; }
  double final_rel_error() const { return records.empty() ? 1.0 : records.back().rel_error; }
};

struct SolveResult {
  VectorXd x;
  SolverTrace trace;
};

/// Raised when an iterate contains NaN or Inf.
class NonFiniteIterate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1/2 ||Ax - b||^2 + lambda ||x||_1.
double objective(const Instance& inst, const Eigen::Ref<const VectorXd>& x);

SolveResult solve(const Instance& inst, const SolverConfig& cfg);

}  // namespace bpdn

#endif  // BPDN_SOLVERS_HPP
