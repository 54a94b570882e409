#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace subspace {

enum class ErrorKind {
  kShape,
  kInvalidDimension,
  kRankDeficiency,
  kDegenerateInput,
  kNumeric,
  kDivergence,
  kInput,
  kGeometry,
  kFormat,
  kIo,
  kConfig,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. `kind()` is stable
/// and is what the CLI prints in its machine-parsable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& m) : Error(ErrorKind::kShape, m) {}
};

class InvalidDimensionError : public Error {
 public:
  explicit InvalidDimensionError(const std::string& m)
      : Error(ErrorKind::kInvalidDimension, m) {}
};

class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(const std::string& m, std::size_t achieved_rank)
      : Error(ErrorKind::kRankDeficiency, m), achieved_rank_(achieved_rank) {}

  std::size_t achieved_rank() const noexcept { return achieved_rank_; }

 private:
  std::size_t achieved_rank_;
};

class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& m)
      : Error(ErrorKind::kDegenerateInput, m) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& m) : Error(ErrorKind::kNumeric, m) {}
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& m, std::size_t step)
      : Error(ErrorKind::kDivergence, m), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& m) : Error(ErrorKind::kInput, m) {}
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& m) : Error(ErrorKind::kGeometry, m) {}
};

/// Malformed embedding or report file. `offset()` is the byte (or line, for
/// text formats) position at which parsing stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& m, std::uint64_t offset)
      : Error(ErrorKind::kFormat, m + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::kIo, m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error(ErrorKind::kConfig, m) {}
};

}  // namespace subspace
