#include "subspace/projection.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "subspace/error.hpp"

namespace subspace {

std::string_view to_string(ProjectionMethod method) {
  switch (method) {
    case ProjectionMethod::kJL: return "JL";
    case ProjectionMethod::kPCA: return "PCA";
    case ProjectionMethod::kLearned: return "Learned";
  }
  return "?";
}

ProjectionMethod parse_projection_method(std::string_view name) {
  if (name == "JL" || name == "jl") return ProjectionMethod::kJL;
  if (name == "PCA" || name == "pca") return ProjectionMethod::kPCA;
  if (name == "Learned" || name == "learned") return ProjectionMethod::kLearned;
  throw InputError("unknown projection method '" + std::string(name) + "'");
}

namespace {

double max_orthonormality_error(const Matrix& rows) {
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    for (std::size_t j = i; j < rows.rows(); ++j) {
      const double g = dot(rows.row(i), rows.row(j));
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

void require_dims(std::size_t d, std::size_t k) {
  if (k == 0 || k > d) {
    throw InvalidDimensionError("projection needs 1 <= k <= d, got k=" + std::to_string(k) +
                                " d=" + std::to_string(d));
  }
}

}  // namespace

ProjectionMatrix::ProjectionMatrix(Matrix map, ProjectionMethod method,
                                   std::optional<std::uint64_t> seed, bool scale_applied)
    : map_(std::move(map)), method_(method), seed_(seed), scale_applied_(scale_applied) {
  require_dims(map_.cols(), map_.rows());
  if (method_ == ProjectionMethod::kPCA && max_orthonormality_error(map_) > 1e-8) {
    throw InputError("PCA projection rows must be orthonormal");
  }
}

ProjectionMatrix ProjectionMatrix::identity(std::size_t d) {
  return ProjectionMatrix(Matrix::identity(d), ProjectionMethod::kLearned, std::nullopt, false);
}

ProjectionMatrix sample_jl(SeededRng& rng, std::size_t d, std::size_t k) {
  require_dims(d, k);
  Matrix r = gaussian_matrix(rng, k, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  for (double& v : r.mutable_data()) v *= scale;
  return ProjectionMatrix(std::move(r), ProjectionMethod::kJL, rng.seed(), true);
}

ProjectionMatrix sample_jl(std::uint64_t seed, std::size_t d, std::size_t k) {
  SeededRng rng(seed);
  return sample_jl(rng, d, k);
}

Matrix project(const ProjectionMatrix& p, const Matrix& x) {
  if (x.cols() != p.source_dim()) {
    throw ShapeError("cannot project " + x.shape_string() + " rows with a " +
                     p.map().shape_string() + " map");
  }
  return matmul_transposed(x, p.map());
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd covariance(const Matrix& centered) {
  const Eigen::Map<const RowMajor> x(centered.data().data(),
                                     static_cast<Eigen::Index>(centered.rows()),
                                     static_cast<Eigen::Index>(centered.cols()));
  const double denom = static_cast<double>(std::max<std::size_t>(centered.rows() - 1, 1));
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(x.cols(), x.cols());
  cov.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / denom);
  return cov.selfadjointView<Eigen::Lower>();
}

struct EigenPairs {
  Vector values;             // descending
  std::vector<Vector> vecs;  // unit, same order
};

EigenPairs dense_eigenpairs(const Eigen::MatrixXd& cov, std::size_t count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericError("covariance eigensolve failed");
  const auto& vals = solver.eigenvalues();  // ascending
  const auto& vecs = solver.eigenvectors();
  EigenPairs out;
  const Eigen::Index n = vals.size();
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::Index col = n - 1 - static_cast<Eigen::Index>(i);
    out.values.push_back(vals(col));
    Vector v(static_cast<std::size_t>(n));
    for (Eigen::Index r = 0; r < n; ++r) v[static_cast<std::size_t>(r)] = vecs(r, col);
    out.vecs.push_back(std::move(v));
  }
  return out;
}

EigenPairs power_eigenpairs(Eigen::MatrixXd cov, std::size_t count) {
  constexpr int kMaxIterations = 1000;
  constexpr double kTolerance = 1e-10;
  const auto n = cov.rows();
  SeededRng rng(0x9ca5eedULL);
  EigenPairs out;
  for (std::size_t c = 0; c < count; ++c) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
    v.normalize();
    for (int it = 0; it < kMaxIterations; ++it) {
      Eigen::VectorXd next = cov * v;
      const double norm = next.norm();
      if (norm == 0.0) break;
      next /= norm;
      if (next.dot(v) < 0) next = -next;
      const double change = (next - v).norm();
      v = next;
      if (change < kTolerance) break;
    }
    const double lambda = v.dot(cov * v);
    cov -= lambda * v * v.transpose();
    out.values.push_back(lambda);
    out.vecs.emplace_back(v.data(), v.data() + n);
  }
  return out;
}

void fix_sign(Vector& v) {
  const auto it = std::max_element(v.begin(), v.end(),
                                   [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*it < 0) {
    for (double& x : v) x = -x;
  }
}

}  // namespace

PcaFit fit_pca(const Matrix& train_features, std::size_t k, PcaSolver solver) {
  const std::size_t d = train_features.cols();
  require_dims(d, k);
  if (train_features.rows() < k) {
    throw RankDeficiencyError("PCA with k=" + std::to_string(k) + " needs at least k rows, got " +
                                  std::to_string(train_features.rows()),
                              train_features.rows());
  }
  Matrix mean = column_mean(train_features);
  const Eigen::MatrixXd cov = covariance(subtract_row(train_features, mean));

  // Rank from the full spectrum so it does not depend on the solver choice.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectrum(cov, Eigen::EigenvaluesOnly);
  const auto& all = spectrum.eigenvalues();
  const double largest = std::max(all.maxCoeff(), 0.0);
  const double cutoff = largest * 1e-10;
  std::size_t rank = 0;
  if (largest > 0.0) {
    for (Eigen::Index i = 0; i < all.size(); ++i) rank += all(i) > cutoff ? 1 : 0;
  }
  if (rank < k) {
    throw RankDeficiencyError("PCA with k=" + std::to_string(k) +
                                  " exceeds the rank of the centered training features (rank " +
                                  std::to_string(rank) + ")",
                              rank);
  }

  EigenPairs pairs =
      solver == PcaSolver::kDense ? dense_eigenpairs(cov, k) : power_eigenpairs(cov, k);

  Matrix map(k, d);
  for (std::size_t i = 0; i < k; ++i) {
    fix_sign(pairs.vecs[i]);
    std::copy(pairs.vecs[i].begin(), pairs.vecs[i].end(), map.row(i).begin());
  }
  // Deflation leaves small cross-talk between unconverged directions.
  if (solver == PcaSolver::kPowerIteration && !orthonormalize_rows(map)) {
    throw NumericError("power iteration produced linearly dependent components");
  }
  const double trace = cov.trace();
  const double kept = std::accumulate(pairs.values.begin(), pairs.values.end(), 0.0);
  return PcaFit{ProjectionMatrix(std::move(map), ProjectionMethod::kPCA, std::nullopt, false),
                std::move(mean), std::move(pairs.values), trace > 0 ? kept / trace : 0.0};
}

Matrix project_centered(const PcaFit& fit, const Matrix& x) {
  return project(fit.projection, subtract_row(x, fit.mean));
}

DistortionReport check_distortion(const ProjectionMatrix& p, const Matrix& x, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("distortion epsilon must be positive");
  if (x.rows() < 2) throw DegenerateInputError("distortion check needs at least 2 points");
  const Matrix projected = project(p, x);
  DistortionReport report;
  report.epsilon = epsilon;
  report.max_expansion = 0.0;
  report.max_contraction = std::numeric_limits<double>::infinity();
  std::size_t within = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = i + 1; j < x.rows(); ++j) {
      const double original = squared_distance(x.row(i), x.row(j));
      if (original <= 0.0) continue;
      const double ratio =
          std::sqrt(squared_distance(projected.row(i), projected.row(j)) / original);
      ++report.num_pairs;
      report.max_expansion = std::max(report.max_expansion, ratio);
      report.max_contraction = std::min(report.max_contraction, ratio);
      if (ratio >= 1.0 - epsilon && ratio <= 1.0 + epsilon) ++within;
    }
  }
  if (report.num_pairs == 0) {
    throw DegenerateInputError("distortion check needs at least two distinct rows");
  }
  report.fraction_within_eps =
      static_cast<double>(within) / static_cast<double>(report.num_pairs);
  return report;
}

std::size_t jl_target_dimension(std::size_t num_points, double epsilon) {
  if (num_points < 2 || !(epsilon > 0.0)) {
    throw InputError("JL target dimension needs n >= 2 and epsilon > 0");
  }
  return static_cast<std::size_t>(
      std::ceil(8.0 * std::log(static_cast<double>(num_points)) / (epsilon * epsilon)));
}

}  // namespace subspace
