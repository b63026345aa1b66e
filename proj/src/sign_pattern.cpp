#include "bpdn/sign_pattern.hpp"

#include "bpdn/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bpdn {

SignPattern::SignPattern(Index n, std::vector<Index> plus, std::vector<Index> minus)
    : n_(n), plus_(std::move(plus)), minus_(std::move(minus)) {
  if (n < 1) throw std::invalid_argument("SignPattern: n must be >= 1");
  std::sort(plus_.begin(), plus_.end());
  std::sort(minus_.begin(), minus_.end());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  auto mark = [&](const std::vector<Index>& set) {
    for (Index i : set) {
      if (i < 0 || i >= n) throw std::invalid_argument("SignPattern: index out of range");
      if (seen[i]) throw std::invalid_argument("SignPattern: index listed twice");
      seen[i] = 1;
    }
  };
  mark(plus_);
  mark(minus_);
  if (plus_.empty() && minus_.empty())
    throw std::invalid_argument("SignPattern: at least one index must be active");
  for (Index i = 0; i < n; ++i)
    if (!seen[i]) inactive_.push_back(i);
}

SignPattern SignPattern::from_vector(const Eigen::Ref<const VectorXd>& x) {
  std::vector<Index> plus, minus;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) > 0) plus.push_back(i);
    else if (x(i) < 0) minus.push_back(i);
  }
  return SignPattern(x.size(), std::move(plus), std::move(minus));
}

SignPattern SignPattern::random(Index n, Index s, std::uint64_t seed) {
  if (s < 1 || s > n) throw std::invalid_argument("SignPattern::random: need 1 <= s <= n");
  Rng support_rng(seed, Stream::kSupport);
  Rng sign_rng(seed, Stream::kSigns);
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  // Partial Fisher-Yates: the first s slots are a uniform s-subset.
  for (Index i = 0; i < s; ++i) {
    const Index j = i + static_cast<Index>(support_rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  std::sort(idx.begin(), idx.begin() + s);
  std::vector<Index> plus, minus;
  for (Index i = 0; i < s; ++i) (sign_rng.coin() ? plus : minus).push_back(idx[i]);
  return SignPattern(n, std::move(plus), std::move(minus));
}

std::vector<Index> SignPattern::active() const {
  std::vector<Index> out;
  out.reserve(plus_.size() + minus_.size());
  std::merge(plus_.begin(), plus_.end(), minus_.begin(), minus_.end(), std::back_inserter(out));
  return out;
}

VectorXd SignPattern::sign_vector() const {
  VectorXd s = VectorXd::Zero(n_);
  for (Index i : plus_) s(i) = 1.0;
  for (Index i : minus_) s(i) = -1.0;
  return s;
}

bool SignPattern::complies(const Eigen::Ref<const VectorXd>& x) const {
  if (x.size() != n_) return false;
  for (Index i : plus_)
    if (!(x(i) > 0)) return false;
  for (Index i : minus_)
    if (!(x(i) < 0)) return false;
  for (Index i : inactive_)
    if (x(i) != 0) return false;
  return true;
}

VectorXd SignPattern::project(const Eigen::Ref<const VectorXd>& v) const {
  VectorXd w = v.cwiseMax(-1.0).cwiseMin(1.0);
  for (Index i : plus_) w(i) = 1.0;
  for (Index i : minus_) w(i) = -1.0;
  return w;
}

}  // namespace bpdn
