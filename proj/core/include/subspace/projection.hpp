#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "subspace/matrix.hpp"
#include "subspace/rng.hpp"

namespace subspace {

enum class ProjectionMethod { kJL, kPCA, kLearned };

std::string_view to_string(ProjectionMethod method);
ProjectionMethod parse_projection_method(std::string_view name);

/// Linear map from R^d to R^k stored as a k x d matrix, tagged with how it was
/// produced. Immutable once built.
class ProjectionMatrix {
 public:
  ProjectionMatrix(Matrix map, ProjectionMethod method, std::optional<std::uint64_t> seed,
                   bool scale_applied);

  const Matrix& map() const noexcept { return map_; }
  ProjectionMethod method() const noexcept { return method_; }
  std::size_t source_dim() const noexcept { return map_.cols(); }
  std::size_t target_dim() const noexcept { return map_.rows(); }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }
  bool scale_applied() const noexcept { return scale_applied_; }

  /// k == d identity map, tagged Learned. Diagnostics only.
  static ProjectionMatrix identity(std::size_t d);

  friend bool operator==(const ProjectionMatrix&, const ProjectionMatrix&) = default;

 private:
  Matrix map_;
  ProjectionMethod method_;
  std::optional<std::uint64_t> seed_;
  bool scale_applied_;
};

/// Oblivious JL map (1/sqrt(k)) * R with R_ij ~ N(0, 1) drawn from `rng`.
/// Requires 1 <= k <= d.
ProjectionMatrix sample_jl(SeededRng& rng, std::size_t d, std::size_t k);

/// Same as above with a fresh generator for `seed`.
ProjectionMatrix sample_jl(std::uint64_t seed, std::size_t d, std::size_t k);

/// Applies the map to every row of x (N x d) giving N x k. No centering.
Matrix project(const ProjectionMatrix& p, const Matrix& x);

enum class PcaSolver {
  /// Full symmetric eigendecomposition of the covariance (tridiagonal QR).
  kDense,
  /// Power iteration with deflation; at most 1000 iterations per component.
  kPowerIteration,
};

struct PcaFit {
  ProjectionMatrix projection;
  /// Training mean (1 x d); subtract it before projecting any split.
  Matrix mean;
  /// Covariance eigenvalues of the kept components, descending.
  Vector eigenvalues;
  /// Sum of kept eigenvalues over the covariance trace.
  double explained_variance_fraction;
};

/// Top-k principal directions of the centered training features, as an
/// orthonormal k x d map in descending eigenvalue order. Each direction's sign
/// is fixed so its largest-magnitude entry is positive.
///
/// Throws RankDeficiencyError when the centered data has rank below k.
PcaFit fit_pca(const Matrix& train_features, std::size_t k, PcaSolver solver = PcaSolver::kDense);

/// Centers x with the training mean, then projects.
Matrix project_centered(const PcaFit& fit, const Matrix& x);

struct DistortionReport {
  std::size_t num_pairs = 0;
  double max_expansion = 0.0;
  double max_contraction = 0.0;
  double fraction_within_eps = 0.0;
  double epsilon = 0.0;
};

/// Ratio ||P(h_i) - P(h_j)|| / ||h_i - h_j|| over every pair of distinct rows.
DistortionReport check_distortion(const ProjectionMatrix& p, const Matrix& x, double epsilon);

/// ceil(8 ln(n) / eps^2): the union-bound target dimension for n points.
std::size_t jl_target_dimension(std::size_t num_points, double epsilon);

}  // namespace subspace
