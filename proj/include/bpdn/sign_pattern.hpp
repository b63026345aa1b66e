#ifndef BPDN_SIGN_PATTERN_HPP
#define BPDN_SIGN_PATTERN_HPP

#include "bpdn/linalg.hpp"

#include <cstdint>
#include <vector>

namespace bpdn {

using Index = Eigen::Index;

/// Partition of {0..n-1} into positive-active, negative-active and inactive
/// indices. Index lists are kept sorted.
class SignPattern {
 public:
  /// Throws std::invalid_argument unless the three sets partition {0..n-1}
  /// and at least one index is active.
  SignPattern(Index n, std::vector<Index> plus, std::vector<Index> minus);

  /// Pattern of the nonzero entries of x.
  static SignPattern from_vector(const Eigen::Ref<const VectorXd>& x);

  /// Uniformly random support of size s with independent fair signs.
  static SignPattern random(Index n, Index s, std::uint64_t seed);

  Index n() const { return n_; }
  Index sparsity() const { return static_cast<Index>(plus_.size() + minus_.size()); }
  const std::vector<Index>& plus() const { return plus_; }
  const std::vector<Index>& minus() const { return minus_; }
  const std::vector<Index>& inactive() const { return inactive_; }
  /// Active indices in increasing order.
  std::vector<Index> active() const;

  /// +1 on plus, -1 on minus, 0 on inactive.
  VectorXd sign_vector() const;

  /// True iff sign(x_i) matches the set containing i, for every i.
  bool complies(const Eigen::Ref<const VectorXd>& x) const;

  /// Projection onto Sign(x*): active entries set to +-1, inactive clamped
  /// to [-1, 1].
  VectorXd project(const Eigen::Ref<const VectorXd>& v) const;

  bool operator==(const SignPattern&) const = default;

 private:
  Index n_;
  std::vector<Index> plus_;
  std::vector<Index> minus_;
  std::vector<Index> inactive_;
};

}  // namespace bpdn

#endif  // BPDN_SIGN_PATTERN_HPP
