#include "bpdn/ensembles.hpp"

#include "bpdn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpdn {

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::PartialDCT: return "PartialDCT";
    case EnsembleKind::Bernoulli: return "Bernoulli";
    case EnsembleKind::ThreeBasesUnion: return "ThreeBasesUnion";
    case EnsembleKind::BandedCoherent: return "BandedCoherent";
  }
  return "?";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "PartialDCT" || name == "dct") return EnsembleKind::PartialDCT;
  if (name == "Bernoulli" || name == "bernoulli") return EnsembleKind::Bernoulli;
  if (name == "ThreeBasesUnion" || name == "threebases") return EnsembleKind::ThreeBasesUnion;
  if (name == "BandedCoherent" || name == "banded") return EnsembleKind::BandedCoherent;
  throw std::invalid_argument("unknown ensemble '" + std::string(name) + "'");
}

std::string_view to_string(MagnitudeLaw law) {
  switch (law) {
    case MagnitudeLaw::GaussianMagnitude: return "GaussianMagnitude";
    case MagnitudeLaw::LogUniformDynamicRange: return "LogUniformDynamicRange";
    case MagnitudeLaw::UnitMagnitude: return "UnitMagnitude";
  }
  return "?";
}

MagnitudeLaw parse_magnitude_law(std::string_view name) {
  if (name == "GaussianMagnitude" || name == "gaussian") return MagnitudeLaw::GaussianMagnitude;
  if (name == "LogUniformDynamicRange" || name == "loguniform")
    return MagnitudeLaw::LogUniformDynamicRange;
  if (name == "UnitMagnitude" || name == "sign") return MagnitudeLaw::UnitMagnitude;
  throw std::invalid_argument("unknown magnitude law '" + std::string(name) + "'");
}

void EnsembleSpec::validate() const {
  if (n < 1 || k < 1) throw std::invalid_argument("ensemble: n and k must be >= 1");
  switch (kind) {
    case EnsembleKind::PartialDCT:
    case EnsembleKind::Bernoulli:
      if (k > n) throw std::invalid_argument("ensemble: need k <= n");
      break;
    case EnsembleKind::ThreeBasesUnion:
      if (n != 3 * k) throw std::invalid_argument("ensemble: ThreeBasesUnion needs n = 3k");
      break;
    case EnsembleKind::BandedCoherent:
      if (k != n) throw std::invalid_argument("ensemble: BandedCoherent needs k = n");
      if (K < 1 || K > n) throw std::invalid_argument("ensemble: BandedCoherent needs 1 <= K <= n");
      break;
  }
}

void SolutionSpec::validate(Index n) const {
  if (sparsity < 1 || sparsity > n) throw std::invalid_argument("solution: need 1 <= s <= n");
  if (law == MagnitudeLaw::LogUniformDynamicRange && !(theta > 1.0))
    throw std::invalid_argument("solution: dynamic range must be > 1");
}

MatrixXd banded_coherent_matrix(Index n, Index K) {
  MatrixXd A = MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < std::min(j + K, n); ++i) A(i, j) = 1.0;
  return A / op_norm(A);
}

MatrixXd build_matrix(const EnsembleSpec& spec) {
  spec.validate();
  const Index n = spec.n, k = spec.k;
  switch (spec.kind) {
    case EnsembleKind::PartialDCT: {
      Rng rng(spec.seed, Stream::kRowSelection);
      std::vector<Index> rows(static_cast<std::size_t>(n));
      std::iota(rows.begin(), rows.end(), Index{0});
      for (Index i = 0; i < k; ++i) {
        const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(rows[i], rows[j]);
      }
      std::sort(rows.begin(), rows.begin() + k);
      const MatrixXd D = dct_matrix(n);
      MatrixXd A(k, n);
      for (Index i = 0; i < k; ++i) A.row(i) = D.row(rows[i]);
      return A;
    }
    case EnsembleKind::Bernoulli: {
      Rng rng(spec.seed, Stream::kMatrix);
      MatrixXd A(k, n);
      // Row-major fill so the draw order matches the serialized layout.
      for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < n; ++j) A(i, j) = rng.coin() ? 1.0 : -1.0;
      return A;
    }
    case EnsembleKind::ThreeBasesUnion: {
      Rng rng(spec.seed, Stream::kMatrix);
      MatrixXd G(k, k);
      for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) G(i, j) = rng.normal();
      Eigen::HouseholderQR<MatrixXd> qr(G);
      MatrixXd A(k, n);
      A.leftCols(k).setIdentity();
      A.middleCols(k, k) = dct_matrix(k);
      A.rightCols(k) = qr.householderQ() * MatrixXd::Identity(k, k);
      return A;
    }
    case EnsembleKind::BandedCoherent:
      return banded_coherent_matrix(n, spec.K);
  }
  throw std::logic_error("build_matrix: unhandled ensemble");
}

double coherence(const Eigen::Ref<const MatrixXd>& A) {
  const Eigen::VectorXd norms = A.colwise().norm().transpose();
  if ((norms.array() == 0.0).any()) throw std::invalid_argument("coherence: zero column");
  const MatrixXd U = A * norms.cwiseInverse().asDiagonal();
  MatrixXd G = U.transpose() * U;
  G.diagonal().setZero();
  return G.cwiseAbs().maxCoeff();
}

double dynamic_range(const Eigen::Ref<const VectorXd>& x) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double m = std::abs(x(i));
    if (m == 0.0) continue;
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  if (hi == 0.0) throw std::invalid_argument("dynamic_range: vector has no nonzero entry");
  return hi / lo;
}

VectorXd build_solution(const SolutionSpec& spec, const SignPattern& pattern) {
  const std::vector<Index> support = pattern.active();
  const Index s = static_cast<Index>(support.size());
  if (s != spec.sparsity)
    throw std::invalid_argument("build_solution: pattern has " + std::to_string(s) +
                                " active indices, spec asks for " + std::to_string(spec.sparsity));
  Rng rng(spec.seed, Stream::kMagnitudes);
  std::vector<double> mags(static_cast<std::size_t>(s), 1.0);
  switch (spec.law) {
    case MagnitudeLaw::GaussianMagnitude:
      for (auto& m : mags) {
        do m = std::abs(rng.normal());
        while (m < kMinMagnitude);
      }
      break;
    case MagnitudeLaw::LogUniformDynamicRange: {
      if (!(spec.theta > 1.0)) throw std::invalid_argument("build_solution: theta must be > 1");
      const double log_theta = std::log(spec.theta);
      for (auto& m : mags) m = std::exp(rng.uniform() * log_theta);
      if (s >= 2) {
        const auto lo = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(s)));
        auto hi = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(s - 1)));
        if (hi >= lo) ++hi;
        mags[lo] = 1.0;
        mags[hi] = spec.theta;
      } else {
        mags[0] = 1.0;
      }
      break;
    }
    case MagnitudeLaw::UnitMagnitude:
      break;
  }
  const VectorXd signs = pattern.sign_vector();
  VectorXd x = VectorXd::Zero(pattern.n());
  for (Index t = 0; t < s; ++t) x(support[t]) = signs(support[t]) * mags[t];
  return x;
}

}  // namespace bpdn
