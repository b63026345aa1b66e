#include <Eigen/SVD>
#include <cmath>
#include "gtest/gtest.h"

#include "bpdn/linalg.hpp"
#include "bpdn/rng.hpp"

namespace bpdn {
namespace {

using Index = Eigen::Index;

MatrixXd gaussian(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed, Stream::kMatrix);
  MatrixXd M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
  return M;
}

VectorXd gaussian(Index n, std::uint64_t seed) { return gaussian(n, 1, seed).col(0); }

// Projector onto rg A^T from the right singular vectors.
MatrixXd svd_projector(const MatrixXd& A) {
  Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index r = 0;
  while (r < sv.size() && sv(r) > 1e-10 * sv(0)) ++r;
  const MatrixXd V = svd.matrixV().leftCols(r);
  return V * V.transpose();
}

TEST(RangeProjector, IdentityIsFullRank) {
  auto P = qr_range_projector(MatrixXd::Identity(3, 3));
  EXPECT_EQ(P.rank(), 3);
  EXPECT_LE((P.matrix() - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RangeProjector, SingleRowKeepsFirstCoordinate) {
  MatrixXd A(1, 3);
  A << 1, 0, 0;
  auto P = qr_range_projector(A);
  EXPECT_EQ(P.rank(), 1);
  VectorXd v = P.apply(Eigen::Vector3d(2, 3, 4));
  EXPECT_NEAR(v(0), 2, 1e-15);
  EXPECT_NEAR(v(1), 0, 1e-15);
  EXPECT_NEAR(v(2), 0, 1e-15);
}

TEST(RangeProjector, MatchesSvdOracle) {
  const MatrixXd A = gaussian(4, 6, 11);
  auto P = qr_range_projector(A);
  const MatrixXd Psvd = svd_projector(A);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const VectorXd v = gaussian(6, 100 + s);
    EXPECT_LE((P.apply(v) - Psvd * v).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST(RangeProjector, RankDeficientMatchesSvdOracle) {
  const MatrixXd A = gaussian(5, 3, 2) * gaussian(3, 8, 3);
  auto P = qr_range_projector(A);
  EXPECT_EQ(P.rank(), 3);
  EXPECT_LE((P.matrix() - svd_projector(A)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(RangeProjector, OrthonormalIdempotentSymmetric) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const MatrixXd A = gaussian(7, 12, seed);
    auto P = qr_range_projector(A);
    const MatrixXd& Q = P.basis();
    EXPECT_LE((Q.transpose() * Q - MatrixXd::Identity(Q.cols(), Q.cols())).cwiseAbs().maxCoeff(),
              1e-12);
    const VectorXd u = gaussian(12, 1000 + seed), v = gaussian(12, 2000 + seed);
    EXPECT_LE((P.apply(P.apply(u)) - P.apply(u)).lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_NEAR(P.apply(u).dot(v), u.dot(P.apply(v)), 1e-12);
    EXPECT_LE((P.apply(u) + P.apply_complement(u) - u).lpNorm<Eigen::Infinity>(), 1e-14);
  }
}

TEST(RangeProjector, FloatScalar) {
  Eigen::MatrixXf A(1, 2);
  A << 1.0f, 1.0f;
  auto P = qr_range_projector(A);
  Eigen::VectorXf v = P.apply(Eigen::Vector2f(1.0f, -1.0f));
  EXPECT_NEAR(v.norm(), 0.0f, 1e-6f);
}

TEST(NumericalRank, Cases) {
  EXPECT_EQ(numerical_rank(MatrixXd::Identity(4, 4)), 4);
  MatrixXd A(2, 2);
  A << 2, 0, 0, 0;
  EXPECT_EQ(numerical_rank(A), 1);
  EXPECT_EQ(numerical_rank(MatrixXd::Zero(3, 2)), 0);
}

TEST(LstsqTranspose, Identity) {
  auto r = lstsq_transpose(MatrixXd::Identity(2, 2), Eigen::Vector2d(1, -1));
  EXPECT_NEAR(r.y(0), 1, 1e-15);
  EXPECT_NEAR(r.y(1), -1, 1e-15);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(LstsqTranspose, RankDeficientMinimumNorm) {
  MatrixXd A(2, 2);
  A << 2, 0, 0, 0;
  auto r = lstsq_transpose(A, Eigen::Vector2d(4, 0));
  EXPECT_NEAR(r.y(0), 2, 1e-14);
  EXPECT_NEAR(r.y(1), 0, 1e-14);
  EXPECT_NEAR(r.residual, 0, 1e-14);
}

TEST(LstsqTranspose, VectorInRange) {
  const MatrixXd A = gaussian(4, 6, 5);
  const VectorXd w = A.transpose() * gaussian(4, 6);
  EXPECT_LE(lstsq_transpose(A, w).residual, 1e-10);
}

TEST(OpNorm, Diagonal) {
  EXPECT_NEAR(op_norm(Eigen::Vector2d(3, 1).asDiagonal().toDenseMatrix()), 3.0, 1e-8);
  EXPECT_NEAR(op_norm(MatrixXd::Identity(5, 5)), 1.0, 1e-12);
}

TEST(OpNorm, MatchesSvd) {
  const MatrixXd A = gaussian(10, 20, 9);
  const double smax = Eigen::JacobiSVD<MatrixXd>(A).singularValues()(0);
  EXPECT_NEAR(op_norm(A), smax, 1e-6 * smax);
}

TEST(OpNorm, StartVectorInKernel) {
  MatrixXd A(1, 2);
  A << 1, -1;
  EXPECT_NEAR(op_norm(A), std::sqrt(2.0), 1e-9);
  EXPECT_EQ(op_norm(MatrixXd::Zero(2, 3)), 0.0);
}

TEST(DctMatrix, Small) {
  EXPECT_EQ(dct_matrix(1)(0, 0), 1.0);
  const MatrixXd M4 = dct_matrix(4);
  EXPECT_LE((M4.transpose() * M4 - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
  const MatrixXd M8 = dct_matrix(8);
  for (Index j = 0; j < 8; ++j) EXPECT_NEAR(M8(0, j), 0.35355339059327373, 1e-15);
}

TEST(DctMatrix, ClosedForm) {
  const Index n = 16;
  const MatrixXd M = dct_matrix(n);
  const double pi = std::acos(-1.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double c = i == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
      EXPECT_NEAR(M(i, j), c * std::cos(pi * (2 * j + 1) * i / (2.0 * n)), 1e-13);
    }
}

}  // namespace
}  // namespace bpdn
