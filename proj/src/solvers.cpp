#include "bpdn/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace bpdn {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Ista: return "Ista";
    case SolverKind::Fista: return "Fista";
    case SolverKind::Gpsr: return "Gpsr";
    case SolverKind::Admm: return "Admm";
  }
  return "?";
}

SolverKind parse_solver_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ista") return SolverKind::Ista;
  if (lower == "fista") return SolverKind::Fista;
  if (lower == "gpsr") return SolverKind::Gpsr;
  if (lower == "admm") return SolverKind::Admm;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

std::string_view to_string(SolveStatus status) {
  return status == SolveStatus::Converged ? "Converged" : "MaxIter";
}

void SolverConfig::validate() const {
  if (!(tol_rel_error > 0)) throw std::invalid_argument("solver: tol_rel_error must be > 0");
  if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (continuation_factor && !(*continuation_factor > 0 && *continuation_factor < 1))
    throw std::invalid_argument("solver: continuation factor must lie in (0, 1)");
  if (!(admm_rho > 0)) throw std::invalid_argument("solver: ADMM penalty must be > 0");
  if (!(bb_min > 0 && bb_min <= bb_max)) throw std::invalid_argument("solver: bad BB bounds");
}

double objective(const Instance& inst, const Eigen::Ref<const VectorXd>& x) {
  return 0.5 * (inst.A * x - inst.b).squaredNorm() + inst.lambda * x.lpNorm<1>();
}

namespace {

using Clock = std::chrono::steady_clock;

/// Shared bookkeeping: relative error, trace, stopping rule.
class Monitor {
 public:
  Monitor(const Instance& inst, const SolverConfig& cfg)
      : inst_(inst), cfg_(cfg), x_star_norm_(inst.x_star.norm()), start_(Clock::now()) {}

  /// Records iteration `it` for iterate x with residual Ax - b. Returns true
  /// when the relative-error target is met.
  bool record(long it, const VectorXd& x, const VectorXd& residual) {
    if (!x.allFinite())
      throw NonFiniteIterate(std::string(to_string(cfg_.kind)) + ": non-finite iterate at " +
                             std::to_string(it));
    const double rel = (x - inst_.x_star).norm() / x_star_norm_;
    const double obj = 0.5 * residual.squaredNorm() + inst_.lambda * x.lpNorm<1>();
    const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
    trace_.records.push_back({it, rel, obj, elapsed});
    if (rel <= cfg_.tol_rel_error) {
      trace_.status = SolveStatus::Converged;
      return true;
    }
    return false;
  }

  SolverTrace& trace() { return trace_; }

 private:
  const Instance& inst_;
  const SolverConfig& cfg_;
  double x_star_norm_;
  Clock::time_point start_;
  SolverTrace trace_;
};

SolveResult run_ista(const Instance& inst, const SolverConfig& cfg) {
  const MatrixXd& A = inst.A;
  const double L = std::pow(op_norm(A), 2);
  const double t = 1.0 / L;
  Monitor mon(inst, cfg);

  double lam = inst.lambda;
  if (cfg.continuation_factor) {
    const double lam0 = 0.9 * (A.transpose() * inst.b).cwiseAbs().maxCoeff();
    lam = std::max(inst.lambda, lam0);
  }

  VectorXd x = VectorXd::Zero(inst.n());
  VectorXd r = -inst.b;  // A x - b
  for (long it = 1; it <= cfg.max_iter; ++it) {
    VectorXd x_new = soft_threshold(x - t * (A.transpose() * r), t * lam);
    VectorXd r_new = A * x_new - inst.b;
    if (cfg.continuation_factor && lam > inst.lambda) {
      const double step = (x_new - x).norm() / std::max(1.0, x.norm());
      if (step < 1e-4) lam = std::max(inst.lambda, lam * *cfg.continuation_factor);
    }
    x = std::move(x_new);
    r = std::move(r_new);
    if (mon.record(it, x, r)) break;
  }
  return {std::move(x), std::move(mon.trace())};
}

SolveResult run_fista(const Instance& inst, const SolverConfig& cfg) {
  const MatrixXd& A = inst.A;
  const double t = 1.0 / std::pow(op_norm(A), 2);
  Monitor mon(inst, cfg);

  VectorXd x = VectorXd::Zero(inst.n());
  VectorXd x_prev = x;
  VectorXd Ax = VectorXd::Zero(inst.k());
  VectorXd Ax_prev = Ax;
  double tk = 1.0;
  double momentum = 0.0;
  for (long it = 1; it <= cfg.max_iter; ++it) {
    const VectorXd y = x + momentum * (x - x_prev);
    const VectorXd Ay = Ax + momentum * (Ax - Ax_prev);
    VectorXd x_new = soft_threshold(y - t * (A.transpose() * (Ay - inst.b)), t * inst.lambda);
    VectorXd Ax_new = A * x_new;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    momentum = (tk - 1.0) / t_next;
    tk = t_next;
    x_prev = std::move(x);
    Ax_prev = std::move(Ax);
    x = std::move(x_new);
    Ax = std::move(Ax_new);
    if (mon.record(it, x, Ax - inst.b)) break;
  }
  return {std::move(x), std::move(mon.trace())};
}

// Gradient projection on  min c^T z + 1/2 z^T B z,  z = [u; v] >= 0,  x = u - v,
// with Barzilai-Borwein steps and the monotone line search along the
// projected direction.
SolveResult run_gpsr(const Instance& inst, const SolverConfig& cfg) {
  const MatrixXd& A = inst.A;
  const double lam = inst.lambda;
  Monitor mon(inst, cfg);

  const Index n = inst.n();
  VectorXd u = VectorXd::Zero(n), v = VectorXd::Zero(n);
  VectorXd x = VectorXd::Zero(n);
  VectorXd r = -inst.b;  // A x - b
  double alpha = std::clamp(1.0 / std::pow(op_norm(A), 2), cfg.bb_min, cfg.bb_max);

  for (long it = 1; it <= cfg.max_iter; ++it) {
    const VectorXd c = A.transpose() * r;
    const VectorXd grad_u = (lam + c.array()).matrix();
    const VectorXd grad_v = (lam - c.array()).matrix();
    const VectorXd du = (u - alpha * grad_u).cwiseMax(0.0) - u;
    const VectorXd dv = (v - alpha * grad_v).cwiseMax(0.0) - v;
    const VectorXd Adx = A * (du - dv);
    const double gamma = Adx.squaredNorm();
    const double slope = du.dot(grad_u) + dv.dot(grad_v);
    const double dnorm2 = du.squaredNorm() + dv.squaredNorm();

    double step = 1.0;
    if (gamma > 0) step = std::clamp(-slope / gamma, 0.0, 1.0);
    u += step * du;
    v += step * dv;
    r += step * Adx;
    x = u - v;

    alpha = gamma > 0 ? std::clamp(dnorm2 / gamma, cfg.bb_min, cfg.bb_max) : cfg.bb_max;
    if (mon.record(it, x, r)) break;
  }
  return {std::move(x), std::move(mon.trace())};
}

SolveResult run_admm(const Instance& inst, const SolverConfig& cfg) {
  const MatrixXd& A = inst.A;
  const double rho = cfg.admm_rho;
  const Index n = inst.n(), k = inst.k();
  Monitor mon(inst, cfg);

  // (A^T A + rho I)^{-1} q, factored once. For wide A the k x k system from
  // the matrix inversion lemma is factored instead.
  const bool wide = k < n;
  Eigen::LLT<MatrixXd> llt;
  if (wide) {
    MatrixXd G = A * A.transpose();
    G.diagonal().array() += rho;
    llt.compute(G);
  } else {
    MatrixXd G = A.transpose() * A;
    G.diagonal().array() += rho;
    llt.compute(G);
  }
  if (llt.info() != Eigen::Success) throw std::runtime_error("admm: factorization failed");
  auto solve_normal = [&](const VectorXd& q) -> VectorXd {
    if (!wide) return llt.solve(q);
    return (q - A.transpose() * llt.solve(A * q)) / rho;
  };

  const VectorXd Atb = A.transpose() * inst.b;
  VectorXd x = VectorXd::Zero(n), z = VectorXd::Zero(n), u = VectorXd::Zero(n);
  for (long it = 1; it <= cfg.max_iter; ++it) {
    x = solve_normal(Atb + rho * (z - u));
    z = soft_threshold(x + u, inst.lambda / rho);
    u += x - z;
    mon.trace().admm_primal_residual = (x - z).norm();
    if (!x.allFinite()) throw NonFiniteIterate("Admm: non-finite iterate at " + std::to_string(it));
    if (mon.record(it, z, A * z - inst.b)) break;
  }
  return {std::move(z), std::move(mon.trace())};
}

}  // namespace

SolveResult solve(const Instance& inst, const SolverConfig& cfg) {
  cfg.validate();
  if (inst.x_star.norm() == 0) throw std::invalid_argument("solve: x* must be nonzero");
  switch (cfg.kind) {
    case SolverKind::Ista: return run_ista(inst, cfg);
    case SolverKind::Fista: return run_fista(inst, cfg);
    case SolverKind::Gpsr: return run_gpsr(inst, cfg);
    case SolverKind::Admm: return run_admm(inst, cfg);
  }
  throw std::logic_error("solve: unhandled solver");
}

}  // namespace bpdn
