#include "subspace/rng.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "subspace/error.hpp"

namespace subspace {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) {
    word = mix64(s);
    s += 0x9e3779b97f4a7c15ULL;
  }
}

std::uint64_t SeededRng::next_u64() noexcept {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double SeededRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::uniform_index(std::uint64_t n) noexcept {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double SeededRng::normal() noexcept {
  if (spare_normal_) {
    const double v = *spare_normal_;
    spare_normal_.reset();
    return v;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

void SeededRng::shuffle(std::span<std::size_t> values) noexcept {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(i));
    std::swap(values[i - 1], values[j]);
  }
}

Matrix gaussian_matrix(SeededRng& rng, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw ShapeError("gaussian_matrix needs positive dimensions, got " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  }
  Matrix m(rows, cols);
  for (double& v : m.mutable_data()) v = rng.normal();
  return m;
}

Matrix random_orthonormal_rows(SeededRng& rng, std::size_t k, std::size_t d) {
  if (k == 0 || k > d) {
    throw InvalidDimensionError("orthonormal basis needs 1 <= k <= d, got k=" +
                                std::to_string(k) + " d=" + std::to_string(d));
  }
  for (;;) {
    Matrix m = gaussian_matrix(rng, k, d);
    if (orthonormalize_rows(m)) return m;
  }
}

Matrix random_orthogonal(SeededRng& rng, std::size_t n) {
  return random_orthonormal_rows(rng, n, n);
}

}  // namespace subspace
