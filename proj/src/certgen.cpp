#include "bpdn/certgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bpdn {

std::string_view to_string(CertMethod method) {
  switch (method) {
    case CertMethod::POCS: return "POCS";
    case CertMethod::QuadProg: return "QuadProg";
    case CertMethod::InjectiveDirect: return "InjectiveDirect";
  }
  return "?";
}

CertMethod parse_cert_method(std::string_view name) {
  if (name == "POCS") return CertMethod::POCS;
  if (name == "QuadProg") return CertMethod::QuadProg;
  if (name == "InjectiveDirect") return CertMethod::InjectiveDirect;
  throw std::invalid_argument("unknown certificate method '" + std::string(name) + "'");
}

namespace {

void check_dims(const Eigen::Ref<const MatrixXd>& A, const SignPattern& pattern) {
  if (A.cols() != pattern.n())
    throw std::invalid_argument("certify: pattern size does not match cols(A)");
  if (!A.allFinite()) throw std::invalid_argument("certify: A has non-finite entries");
}

Certificate finish(const Eigen::Ref<const MatrixXd>& A, const SignPattern& pattern, VectorXd w,
                   CertMethod method, long iterations) {
  auto ls = lstsq_transpose(A, w);
  Certificate cert;
  cert.sign_residual = sign_residual(pattern, w);
  cert.w = std::move(w);
  cert.y = std::move(ls.y);
  cert.range_residual = ls.residual;
  cert.method = method;
  cert.iterations = iterations;
  return cert;
}

std::string describe_failure(std::string_view what, CertMethod method, double gap, long iters) {
  std::ostringstream os;
  os << what << " (" << to_string(method) << ", final gap " << gap << " after " << iters
     << " iterations)";
  return os.str();
}

}  // namespace

double range_residual(const Eigen::Ref<const MatrixXd>& A, const Certificate& cert) {
  return (A.transpose() * cert.y - cert.w).cwiseAbs().maxCoeff();
}

double sign_residual(const SignPattern& pattern, const Eigen::Ref<const VectorXd>& w) {
  return (w - pattern.project(w)).cwiseAbs().maxCoeff();
}

Certificate certify_pocs(const Eigen::Ref<const MatrixXd>& A, const SignPattern& pattern,
                         const PocsOptions& opts) {
  check_dims(A, pattern);
  return certify_pocs(A, qr_range_projector(A), pattern, opts);
}

Certificate certify_pocs(const Eigen::Ref<const MatrixXd>& A, const RangeProjector<double>& P,
                         const SignPattern& pattern, const PocsOptions& opts) {
  check_dims(A, pattern);
  if (!(opts.tol > 0)) throw std::invalid_argument("certify_pocs: tol must be > 0");
  VectorXd w = opts.w0 ? *opts.w0 : pattern.sign_vector();
  if (w.size() != pattern.n()) throw std::invalid_argument("certify_pocs: w0 has wrong length");

  double gap = std::numeric_limits<double>::infinity();
  for (long it = 1; it <= opts.max_iter; ++it) {
    const VectorXd v = P.apply(w);
    VectorXd w_next = pattern.project(v);
    gap = std::max((v - w).norm(), (w_next - v).norm());
    w = std::move(w_next);
    if (gap <= opts.tol) return finish(A, pattern, std::move(w), CertMethod::POCS, it);
  }
  throw CertificationError(CertificationError::Kind::Infeasible, CertMethod::POCS, gap,
                           opts.max_iter,
                           describe_failure("no certificate for this sign pattern",
                                            CertMethod::POCS, gap, opts.max_iter));
}

Certificate certify_quadprog(const Eigen::Ref<const MatrixXd>& A, const SignPattern& pattern,
                             const QuadProgOptions& opts) {
  check_dims(A, pattern);
  return certify_quadprog(A, qr_range_projector(A), pattern, opts);
}

Certificate certify_quadprog(const Eigen::Ref<const MatrixXd>& A,
                             const RangeProjector<double>& P, const SignPattern& pattern,
                             const QuadProgOptions& opts) {
  check_dims(A, pattern);
  if (!(opts.tol > 0)) throw std::invalid_argument("certify_quadprog: tol must be > 0");
  const std::vector<Index>& inactive = pattern.inactive();
  const Index m = static_cast<Index>(inactive.size());
  const VectorXd s = pattern.sign_vector();  // P_A^T s
  const VectorXd v_bar = P.apply_complement(s);  // (Id - P) P_A^T s

  auto fail = [&](double gap, long iters) -> CertificationError {
    return CertificationError(CertificationError::Kind::NoSolutionForPattern,
                              CertMethod::QuadProg, gap, iters,
                              describe_failure("no solution with this sign pattern",
                                               CertMethod::QuadProg, gap, iters));
  };

  if (m == 0) {
    const double gap = v_bar.norm();
    if (gap > opts.tol) throw fail(gap, 0);
    return finish(A, pattern, s, CertMethod::QuadProg, 0);
  }

  // P_bar = (P - Id) P_I^T = Q1 Q1_I^T - E_I, applied in factored form.
  const MatrixXd& Q1 = P.basis();
  MatrixXd Q1_I(m, Q1.cols());
  for (Index t = 0; t < m; ++t) Q1_I.row(t) = Q1.row(inactive[t]);

  auto apply_pbar = [&](const VectorXd& z) {
    VectorXd out = Q1 * (Q1_I.transpose() * z);
    for (Index t = 0; t < m; ++t) out(inactive[t]) -= z(t);
    return out;
  };
  auto apply_pbar_t = [&](const VectorXd& r) {
    VectorXd out = Q1_I * (Q1.transpose() * r);
    for (Index t = 0; t < m; ++t) out(t) -= r(inactive[t]);
    return out;
  };

  double lipschitz = 1.0;  // ||P_bar|| <= ||P - Id|| <= 1
  {
    MatrixXd P_bar = Q1 * Q1_I.transpose();
    for (Index t = 0; t < m; ++t) P_bar(inactive[t], t) -= 1.0;
    if (P_bar.cwiseAbs().maxCoeff() == 0.0) {
      lipschitz = 0.0;
    } else {
      try {
        const double nrm = op_norm(P_bar);
        lipschitz = nrm * nrm;
      } catch (const std::runtime_error&) {
        lipschitz = 1.0;
      }
    }
  }

  VectorXd z = VectorXd::Zero(m);
  VectorXd r = apply_pbar(z) - v_bar;
  double res = r.norm();
  double window_start = res;
  long it = 0;
  while (res > opts.tol) {
    if (it >= opts.max_iter || lipschitz == 0.0) throw fail(res, it);
    ++it;
    z = (z - apply_pbar_t(r) / lipschitz).cwiseMax(-1.0).cwiseMin(1.0);
    r = apply_pbar(z) - v_bar;
    res = r.norm();
    if (it % opts.stagnation_window == 0) {
      if (res > opts.tol && (window_start - res) < opts.stagnation_ratio * window_start)
        throw fail(res, it);
      window_start = res;
    }
  }

  VectorXd w = s;
  for (Index t = 0; t < m; ++t) w(inactive[t]) = z(t);
  return finish(A, pattern, std::move(w), CertMethod::QuadProg, it);
}

Certificate certify_injective(const Eigen::Ref<const MatrixXd>& A, const SignPattern& pattern,
                              const Eigen::Ref<const VectorXd>& inactive_fill) {
  check_dims(A, pattern);
  const std::vector<Index>& inactive = pattern.inactive();
  if (inactive_fill.size() != static_cast<Index>(inactive.size()))
    throw std::invalid_argument("certify_injective: fill must have one entry per inactive index");
  if (inactive_fill.size() > 0 && inactive_fill.cwiseAbs().maxCoeff() > 1.0)
    throw std::invalid_argument("certify_injective: fill entries must lie in [-1, 1]");
  if (numerical_rank(A) < A.cols())
    throw CertificationError(CertificationError::Kind::NotInjective, CertMethod::InjectiveDirect,
                             0.0, 0, "certify_injective: A does not have full column rank");
  VectorXd w = pattern.sign_vector();
  for (std::size_t t = 0; t < inactive.size(); ++t)
    w(inactive[t]) = inactive_fill(static_cast<Index>(t));
  return finish(A, pattern, std::move(w), CertMethod::InjectiveDirect, 0);
}

Certificate certify(const Eigen::Ref<const MatrixXd>& A, const SignPattern& pattern,
                    CertStrategy strategy) {
  check_dims(A, pattern);
  if (strategy == CertStrategy::Auto && A.rows() >= A.cols() && numerical_rank(A) == A.cols()) {
    const VectorXd fill = VectorXd::Zero(static_cast<Index>(pattern.inactive().size()));
    return certify_injective(A, pattern, fill);
  }
  const RangeProjector<double> P = qr_range_projector(A);
  if (strategy == CertStrategy::QuadProg) return certify_quadprog(A, P, pattern);
  try {
    return certify_pocs(A, P, pattern);
  } catch (const CertificationError&) {
    if (strategy == CertStrategy::Pocs) throw;
  }
  return certify_quadprog(A, P, pattern);
}

Instance assemble_instance(MatrixXd A, const SignPattern& pattern, VectorXd x_star,
                           double lambda, Certificate cert, InstanceMeta meta) {
  if (!(lambda > 0)) throw std::invalid_argument("assemble_instance: lambda must be > 0");
  if (x_star.size() != A.cols() || cert.y.size() != A.rows() || cert.w.size() != A.cols())
    throw std::invalid_argument("assemble_instance: dimension mismatch");
  if (!pattern.complies(x_star))
    throw PatternMismatch("assemble_instance: x* does not follow the sign pattern");
  Instance inst;
  inst.b = lambda * cert.y + A * x_star;
  inst.A = std::move(A);
  inst.lambda = lambda;
  inst.x_star = std::move(x_star);
  inst.certificate = std::move(cert);
  inst.meta = std::move(meta);
  inst.optimality_residual = verify_optimality(inst);
  return inst;
}

double optimality_residual(const Eigen::Ref<const MatrixXd>& A,
                           const Eigen::Ref<const VectorXd>& b, double lambda,
                           const Eigen::Ref<const VectorXd>& x) {
  const VectorXd g = -(A.transpose() * (A * x - b));
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    double viol;
    if (x(i) > 0) viol = std::abs(g(i) - lambda);
    else if (x(i) < 0) viol = std::abs(g(i) + lambda);
    else viol = std::max(std::abs(g(i)) - lambda, 0.0);
    worst = std::max(worst, viol);
  }
  return worst;
}

double verify_optimality(const Instance& inst) {
  return optimality_residual(inst.A, inst.b, inst.lambda, inst.x_star);
}

EquivalentParameters equivalent_parameters(const Instance& inst) {
  return {(inst.A * inst.x_star - inst.b).norm(), inst.x_star.lpNorm<1>()};
}

Instance generate_instance(const EnsembleSpec& ens, const SolutionSpec& sol, double lambda,
                           CertStrategy strategy) {
  ens.validate();
  sol.validate(ens.n);
  MatrixXd A = build_matrix(ens);
  const SignPattern pattern = SignPattern::random(ens.n, sol.sparsity, sol.seed);
  VectorXd x = build_solution(sol, pattern);
  Certificate cert = certify(A, pattern, strategy);
  return assemble_instance(std::move(A), pattern, std::move(x), lambda, std::move(cert),
                           InstanceMeta{ens, sol});
}

}  // namespace bpdn
