#include "seqmeas/error.hpp"

#include <sstream>
#include <utility>

namespace seqmeas {

namespace {
std::string describe(const std::string& constraint, double residual) {
  std::ostringstream os;
  os.precision(15);
  os << "invariant violated: " << constraint << " (residual " << residual
     << ")";
  return os.str();
}
}  // namespace

InvariantError::InvariantError(std::string constraint, double residual)
    : std::runtime_error(describe(constraint, residual)),
      constraint_(std::move(constraint)),
      residual_(residual) {}

}  // namespace seqmeas
