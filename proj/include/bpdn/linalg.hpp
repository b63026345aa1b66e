// Dense kernels shared by the instance generator, the solvers and the oracle.
//
// Everything here is templated on the scalar type and accepts arbitrary Eigen
// expressions; the rest of the library instantiates it with double.

#ifndef BPDN_LINALG_HPP
#define BPDN_LINALG_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace bpdn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Relative cutoff on |R_ii| below which a column is treated as dependent.
inline constexpr double kRankTolerance = 1e-12;

/// Orthogonal projector onto rg A^T, stored as the thin factor Q1 (n x r) so
/// that P = Q1 Q1^T is never formed.
template <typename Scalar>
class RangeProjector {
 public:
  RangeProjector() = default;
  RangeProjector(Matrix<Scalar> q1, Eigen::Index source_rows)
      : q1_(std::move(q1)), source_rows_(source_rows) {}

  Eigen::Index rank() const { return q1_.cols(); }
  Eigen::Index dim() const { return q1_.rows(); }
  Eigen::Index source_rows() const { return source_rows_; }
  const Matrix<Scalar>& basis() const { return q1_; }

  template <typename Derived>
  Vector<Scalar> apply(const Eigen::MatrixBase<Derived>& v) const {
    if (rank() == 0) return Vector<Scalar>::Zero(v.size());
    Vector<Scalar> coeffs = q1_.transpose() * v;
    return q1_ * coeffs;
  }

  /// Applies Id - P.
  template <typename Derived>
  Vector<Scalar> apply_complement(const Eigen::MatrixBase<Derived>& v) const {
    return v - apply(v);
  }

  Matrix<Scalar> matrix() const { return q1_ * q1_.transpose(); }

 private:
  Matrix<Scalar> q1_;
  Eigen::Index source_rows_ = 0;
};

/// Builds the projector onto rg A^T from a column-pivoted QR of A^T.
template <typename Derived>
RangeProjector<typename Derived::Scalar> qr_range_projector(
    const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = A.cols();
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(A.transpose());
  qr.setThreshold(Scalar(kRankTolerance));
  const Eigen::Index r = qr.rank();
  Matrix<Scalar> q1 = qr.householderQ() * Matrix<Scalar>::Identity(n, r);
  return RangeProjector<Scalar>(std::move(q1), A.rows());
}

/// Numerical rank with the same cutoff as qr_range_projector.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(A);
  qr.setThreshold(Scalar(kRankTolerance));
  return qr.rank();
}

template <typename Scalar>
struct LeastSquaresResult {
  Vector<Scalar> y;
  Scalar residual;  // ||A^T y - w||_inf
};

/// Minimum-norm least-squares solution of A^T y = w.
template <typename DerivedA, typename DerivedW>
LeastSquaresResult<typename DerivedA::Scalar> lstsq_transpose(
    const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedW>& w) {
  using Scalar = typename DerivedA::Scalar;
  if (w.size() != A.cols())
    throw std::invalid_argument("lstsq_transpose: w must have length cols(A)");
  Matrix<Scalar> At = A.transpose();
  Eigen::CompleteOrthogonalDecomposition<Matrix<Scalar>> cod;
  cod.setThreshold(Scalar(kRankTolerance));
  cod.compute(At);
  Vector<Scalar> y = cod.solve(w);
  Scalar residual = (At * y - w).cwiseAbs().maxCoeff();
  return {std::move(y), residual};
}

/// Largest singular value by power iteration on A^T A, started from the
/// normalized all-ones vector. Throws std::runtime_error if `max_iter`
/// iterations pass without the estimate settling to relative `tol`.
template <typename Derived>
typename Derived::Scalar op_norm(const Eigen::MatrixBase<Derived>& A,
                                 typename Derived::Scalar tol = 1e-10,
                                 int max_iter = 10000) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = A.cols();
  Vector<Scalar> v = Vector<Scalar>::Ones(n) / std::sqrt(Scalar(n));
  Vector<Scalar> Av = A * v;
  Scalar sigma = Av.norm();
  for (int it = 0; it < max_iter; ++it) {
    Vector<Scalar> g = A.transpose() * Av;
    const Scalar gnorm = g.norm();
    if (gnorm == Scalar(0)) {
      // The start vector sits in ker A. Restart from a unit coordinate that
      // does not, or return 0 for the zero matrix.
      Eigen::Index j = 0;
      A.colwise().norm().maxCoeff(&j);
      if (A.col(j).norm() == Scalar(0)) return Scalar(0);
      v.setZero();
      v(j) = Scalar(1);
      Av = A * v;
      sigma = Av.norm();
      continue;
    }
    v = g / gnorm;
    Av = A * v;
    const Scalar next = Av.norm();
    if (std::abs(next - sigma) <= tol * next) return next;
    sigma = next;
  }
  throw std::runtime_error("op_norm: power iteration did not converge");
}

/// Orthonormal DCT-II matrix: entry (i, j) = c_i cos(pi i (2j+1) / (2n)).
template <typename Scalar = double>
Matrix<Scalar> dct_matrix(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("dct_matrix: n must be >= 1");
  Matrix<Scalar> M(n, n);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar c0 = std::sqrt(Scalar(1) / Scalar(n));
  const Scalar ci = std::sqrt(Scalar(2) / Scalar(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar c = i == 0 ? c0 : ci;
    for (Eigen::Index j = 0; j < n; ++j)
      M(i, j) = c * std::cos(pi * Scalar(i) * Scalar(2 * j + 1) / Scalar(2 * n));
  }
  return M;
}

}  // namespace bpdn

#endif  // BPDN_LINALG_HPP
