#include "subspace/error.hpp"

namespace subspace {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kInvalidDimension: return "invalid_dimension";
    case ErrorKind::kRankDeficiency: return "rank_deficiency";
    case ErrorKind::kDegenerateInput: return "degenerate_input";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kInput: return "input";
    case ErrorKind::kGeometry: return "geometry";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace subspace
