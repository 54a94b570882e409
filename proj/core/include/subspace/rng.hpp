#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "subspace/matrix.hpp"

namespace subspace {

/// xoshiro256** seeded through splitmix64; normals via Box-Muller.
///
/// The stream is fully determined by the seed and the sequence of calls.
/// Streams are not meant to match any other library bit for bit. A generator
/// has a single owner: never draw from one instance on two threads.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;

  double normal() noexcept;

  /// In-place Fisher-Yates shuffle.
  void shuffle(std::span<std::size_t> values) noexcept;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  std::optional<double> spare_normal_;
};

/// splitmix64 finalizer; also used to mix seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Matrix of i.i.d. standard normal draws, filled row-major.
Matrix gaussian_matrix(SeededRng& rng, std::size_t rows, std::size_t cols);

/// Random orthogonal n x n matrix (QR of a Gaussian matrix with the usual sign fix).
Matrix random_orthogonal(SeededRng& rng, std::size_t n);

/// k x d matrix with orthonormal rows drawn uniformly at random.
Matrix random_orthonormal_rows(SeededRng& rng, std::size_t k, std::size_t d);

}  // namespace subspace
