// Construction of (QP_lambda) instances with a prescribed minimizer.
//
// Given A, a sign pattern and lambda, find w in rg A^T with w in Sign(x*),
// solve A^T y = w and set b = lambda y + A x*. Then -A^T(A x* - b) = lambda w,
// which is exactly the optimality condition for
//     min_x 1/2 ||A x - b||^2 + lambda ||x||_1
// at x*. Three ways to find w are provided: alternating projections (POCS),
// a box-constrained least-squares formulation, and a direct solve when A is
// injective.

#ifndef BPDN_CERTGEN_HPP
#define BPDN_CERTGEN_HPP

#include "bpdn/ensembles.hpp"
#include "bpdn/linalg.hpp"
#include "bpdn/sign_pattern.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bpdn {

enum class CertMethod { POCS, QuadProg, InjectiveDirect };

std::string_view to_string(CertMethod method);
CertMethod parse_cert_method(std::string_view name);

struct Certificate {
  VectorXd w;
  VectorXd y;
  double range_residual = 0.0;  // ||A^T y - w||_inf
  double sign_residual = 0.0;   // distance of w from Sign(x*), max norm
  CertMethod method = CertMethod::POCS;
  long iterations = 0;
};

/// Raised when no certificate could be produced for the requested pattern.
class CertificationError : public std::runtime_error {
 public:
  enum class Kind { Infeasible, NoSolutionForPattern, NotInjective };

  CertificationError(Kind kind, CertMethod method, double final_gap, long iterations,
                     const std::string& what)
      : std::runtime_error(what),
        kind_(kind), method_(method), final_gap_(final_gap), iterations_(iterations) {}

  Kind kind() const { return kind_; }
  CertMethod method() const { return method_; }
  double final_gap() const { return final_gap_; }
  long iterations() const { return iterations_; }

 private:
  Kind kind_;
  CertMethod method_;
  double final_gap_;
  long iterations_;
};

/// Raised by assemble_instance when x* does not follow the pattern.
class PatternMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PocsOptions {
  double tol = 1e-12;
  long max_iter = 50000;
  std::optional<VectorXd> w0;  // defaults to the pattern's sign vector
};

struct QuadProgOptions {
  double tol = 1e-12;
  long max_iter = 200000;
  long stagnation_window = 100;
  double stagnation_ratio = 1e-12;
};

Certificate certify_pocs(const Eigen::Ref<const MatrixXd>& A, const SignPattern& pattern,
                         const PocsOptions& opts = {});

/// Variant reusing a precomputed projector onto rg A^T.
Certificate certify_pocs(const Eigen::Ref<const MatrixXd>& A, const RangeProjector<double>& P,
                         const SignPattern& pattern, const PocsOptions& opts = {});

Certificate certify_quadprog(const Eigen::Ref<const MatrixXd>& A, const SignPattern& pattern,
                             const QuadProgOptions& opts = {});

Certificate certify_quadprog(const Eigen::Ref<const MatrixXd>& A,
                             const RangeProjector<double>& P, const SignPattern& pattern,
                             const QuadProgOptions& opts = {});

/// For A with full column rank: w = +-1 on the support, `inactive_fill` on
/// the inactive indices (in increasing index order), y from A^T y = w.
Certificate certify_injective(const Eigen::Ref<const MatrixXd>& A, const SignPattern& pattern,
                              const Eigen::Ref<const VectorXd>& inactive_fill);

enum class CertStrategy { Auto, Pocs, QuadProg };

/// Auto: the injective shortcut when rank A = n, else POCS falling back to
/// QuadProg. Rethrows the last CertificationError when every method fails.
Certificate certify(const Eigen::Ref<const MatrixXd>& A, const SignPattern& pattern,
                    CertStrategy strategy = CertStrategy::Auto);

struct InstanceMeta {
  std::optional<EnsembleSpec> ensemble;
  std::optional<SolutionSpec> solution;
};

struct Instance {
  MatrixXd A;
  VectorXd b;
  double lambda = 0.0;
  VectorXd x_star;
  Certificate certificate;
  InstanceMeta meta;
  double optimality_residual = 0.0;

  Index n() const { return A.cols(); }
  Index k() const { return A.rows(); }
};

/// b = lambda y + A x*. Throws PatternMismatch if x* does not follow `pattern`.
Instance assemble_instance(MatrixXd A, const SignPattern& pattern, VectorXd x_star,
                           double lambda, Certificate cert, InstanceMeta meta = {});

/// Max violation of the optimality condition -A^T(A x* - b) in lambda Sign(x*).
/// Zero certifies x* as a minimizer.
double verify_optimality(const Instance& inst);

/// Same check for an arbitrary point and data.
double optimality_residual(const Eigen::Ref<const MatrixXd>& A,
                           const Eigen::Ref<const VectorXd>& b, double lambda,
                           const Eigen::Ref<const VectorXd>& x);

struct EquivalentParameters {
  double sigma;  // ||A x* - b||_2, for the constrained (BP_sigma) form
  double tau;    // ||x*||_1, for the LASSO (LS_tau) form
};

EquivalentParameters equivalent_parameters(const Instance& inst);

/// Residuals of a certificate against A and the pattern of x*.
double range_residual(const Eigen::Ref<const MatrixXd>& A, const Certificate& cert);
double sign_residual(const SignPattern& pattern, const Eigen::Ref<const VectorXd>& w);

/// Full recipe: matrix from `ens`, random pattern and magnitudes from `sol`,
/// certificate via `strategy`, then assembly. The pattern uses sol.seed.
Instance generate_instance(const EnsembleSpec& ens, const SolutionSpec& sol, double lambda,
                           CertStrategy strategy = CertStrategy::Auto);

}  // namespace bpdn

#endif  // BPDN_CERTGEN_HPP
