// Measurement matrices and prescribed solutions for the benchmark families.

#ifndef BPDN_ENSEMBLES_HPP
#define BPDN_ENSEMBLES_HPP

#include "bpdn/linalg.hpp"
#include "bpdn/sign_pattern.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace bpdn {

enum class EnsembleKind { PartialDCT, Bernoulli, ThreeBasesUnion, BandedCoherent };

std::string_view to_string(EnsembleKind kind);
/// Accepts the canonical names and the CLI spellings dct/bernoulli/threebases/banded.
EnsembleKind parse_ensemble_kind(std::string_view name);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::PartialDCT;
  Index n = 0;  // variables (columns)
  Index k = 0;  // measurements (rows)
  Index K = 1;  // band width, BandedCoherent only
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;
  bool operator==(const EnsembleSpec&) const = default;
};

enum class MagnitudeLaw {
  GaussianMagnitude,       // |N(0,1)|, resampled below 1e-6
  LogUniformDynamicRange,  // log-uniform on [1, theta], extremes pinned
  UnitMagnitude,           // all magnitudes 1 (random +-1 entries)
};

std::string_view to_string(MagnitudeLaw law);
MagnitudeLaw parse_magnitude_law(std::string_view name);

struct SolutionSpec {
  Index sparsity = 1;
  MagnitudeLaw law = MagnitudeLaw::GaussianMagnitude;
  double theta = 1.0;  // target dynamic range, LogUniformDynamicRange only
  std::uint64_t seed = 0;

  void validate(Index n) const;
  bool operator==(const SolutionSpec&) const = default;
};

inline constexpr double kMinMagnitude = 1e-6;

MatrixXd build_matrix(const EnsembleSpec& spec);

/// Lower-banded 0/1 matrix with K ones per column (truncated at the bottom),
/// scaled to unit spectral norm.
MatrixXd banded_coherent_matrix(Index n, Index K);

/// Largest absolute cosine between two distinct columns. Throws on a zero column.
double coherence(const Eigen::Ref<const MatrixXd>& A);

/// max |x_i| / min |x_i| over the nonzero entries. Throws if x is zero.
double dynamic_range(const Eigen::Ref<const VectorXd>& x);

/// x* following `pattern` with magnitudes drawn according to `spec`.
VectorXd build_solution(const SolutionSpec& spec, const SignPattern& pattern);

}  // namespace bpdn

#endif  // BPDN_ENSEMBLES_HPP
