#include "attnlab/core/error.hpp"

#include "attnlab/core/dense.hpp"

namespace attnlab {

std::string shape_string(long rows, long cols) {
  return "(" + std::to_string(rows) + "x" + std::to_string(cols) + ")";
}

void require_finite(const Matrix& m, const std::string& what) {
  if (!all_finite(m)) throw DomainError(what + ": produced a non-finite entry");
}

}  // namespace attnlab
