#include "bpdn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bpdn {

namespace {

constexpr double kSlack = 1e-10;

double lasso_objective(const Eigen::Ref<const MatrixXd>& A, const Eigen::Ref<const VectorXd>& b,
                       double lambda, const VectorXd& x) {
  return 0.5 * (A * x - b).squaredNorm() + lambda * x.lpNorm<1>();
}

// Subgradient condition written out directly from the data.
double kkt(const Eigen::Ref<const MatrixXd>& A, const Eigen::Ref<const VectorXd>& b,
           double lambda, const VectorXd& x) {
  const VectorXd corr = A.transpose() * (b - A * x);
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double target = x(i) > 0 ? lambda : (x(i) < 0 ? -lambda : 0.0);
    const double viol = x(i) != 0 ? std::abs(corr(i) - target)
                                  : std::max(0.0, std::abs(corr(i)) - lambda);
    worst = std::max(worst, viol);
  }
  return worst;
}

bool lex_less(const VectorXd& a, const VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// Advances `comb` (sorted, size c, entries < n) to the next combination in
// lexicographic order. Returns false after the last one.
bool next_combination(std::vector<Index>& comb, Index n) {
  const Index c = static_cast<Index>(comb.size());
  Index i = c - 1;
  while (i >= 0 && comb[i] == n - c + i) --i;
  if (i < 0) return false;
  ++comb[i];
  for (Index j = i + 1; j < c; ++j) comb[j] = comb[j - 1] + 1;
  return true;
}

}  // namespace

OracleResult brute_force_solve(const Eigen::Ref<const MatrixXd>& A,
                               const Eigen::Ref<const VectorXd>& b, double lambda) {
  const Index k = A.rows(), n = A.cols();
  if (n > kOracleMaxDim) throw std::invalid_argument("brute_force_solve: n exceeds 14");
  if (b.size() != k) throw std::invalid_argument("brute_force_solve: b has wrong length");
  if (!(lambda > 0)) throw std::invalid_argument("brute_force_solve: lambda must be > 0");

  std::optional<VectorXd> best;
  double best_obj = std::numeric_limits<double>::infinity();
  auto consider = [&](const VectorXd& x) {
    const double obj = lasso_objective(A, b, lambda, x);
    const double tie = 1e-12 * (1.0 + std::abs(best_obj));
    if (!best || obj < best_obj - tie || (std::abs(obj - best_obj) <= tie && lex_less(x, *best))) {
      best = x;
      best_obj = std::min(obj, best_obj);
    }
  };

  // Empty support: x = 0 is optimal iff ||A^T b||_inf <= lambda.
  if (n == 0 || (A.transpose() * b).cwiseAbs().maxCoeff() <= lambda + kSlack)
    consider(VectorXd::Zero(n));

  for (Index c = 1; c <= std::min(n, k); ++c) {
    std::vector<Index> support(static_cast<std::size_t>(c));
    for (Index j = 0; j < c; ++j) support[j] = j;
    do {
      MatrixXd AS(k, c);
      for (Index j = 0; j < c; ++j) AS.col(j) = A.col(support[j]);
      Eigen::ColPivHouseholderQR<MatrixXd> rank_check(AS);
      rank_check.setThreshold(1e-12);
      if (rank_check.rank() < c) continue;
      const Eigen::LDLT<MatrixXd> gram(AS.transpose() * AS);
      const VectorXd ASb = AS.transpose() * b;

      for (unsigned long mask = 0; mask < (1UL << c); ++mask) {
        VectorXd s(c);
        for (Index j = 0; j < c; ++j) s(j) = (mask >> (c - 1 - j)) & 1UL ? 1.0 : -1.0;
        const VectorXd xs = gram.solve(ASb - lambda * s);
        bool signs_ok = true;
        for (Index j = 0; j < c && signs_ok; ++j) signs_ok = xs(j) * s(j) > 0;
        if (!signs_ok) continue;

        VectorXd x = VectorXd::Zero(n);
        for (Index j = 0; j < c; ++j) x(support[j]) = xs(j);
        const VectorXd corr = A.transpose() * (A * x - b);
        double off = 0.0;
        for (Index i = 0; i < n; ++i)
          if (x(i) == 0) off = std::max(off, std::abs(corr(i)));
        if (off <= lambda + kSlack) consider(x);
      }
    } while (next_combination(support, n));
  }

  if (!best) throw NoSolutionFound("brute_force_solve: no sign pattern satisfies optimality");
  OracleResult out;
  out.x_hat = *best;
  out.kkt_residual = kkt(A, b, lambda, out.x_hat);
  out.objective = lasso_objective(A, b, lambda, out.x_hat);
  if (out.x_hat.cwiseAbs().maxCoeff() > 0) out.active_pattern = SignPattern::from_vector(out.x_hat);
  return out;
}

}  // namespace bpdn
