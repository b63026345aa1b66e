// Exact solver for tiny (QP_lambda) instances by enumerating supports and
// sign vectors. Used as ground truth in tests; shares no code with certgen.

#ifndef BPDN_ORACLE_HPP
#define BPDN_ORACLE_HPP

#include "bpdn/linalg.hpp"
#include "bpdn/sign_pattern.hpp"

#include <optional>
#include <stdexcept>

namespace bpdn {

inline constexpr Index kOracleMaxDim = 14;

struct OracleResult {
  VectorXd x_hat;
  /// Empty when x_hat = 0 (a SignPattern needs an active index).
  std::optional<SignPattern> active_pattern;
  double kkt_residual;
  double objective;
};

class NoSolutionFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every support S with full-column-rank A_S and every sign vector s on S is
/// tried: x_S solves A_S^T A_S x_S = A_S^T b - lambda s and is accepted when
/// sign(x_S) = s and ||A_{S^c}^T (Ax - b)||_inf <= lambda + 1e-10. Among the
/// accepted points the smallest objective wins, ties going to the
/// lexicographically smallest x. Requires cols(A) <= kOracleMaxDim.
OracleResult brute_force_solve(const Eigen::Ref<const MatrixXd>& A,
                               const Eigen::Ref<const VectorXd>& b, double lambda);

}  // namespace bpdn

#endif  // BPDN_ORACLE_HPP
