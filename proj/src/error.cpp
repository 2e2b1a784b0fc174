#include "kvlab/error.hpp"

#include <sstream>

namespace kvlab {

namespace {
std::string momentum_message(double magnitude, double tol) {
  std::ostringstream os;
  os << "vanishing momentum: |J| = " << magnitude << " <= tol = " << tol;
  return os.str();
}
}  // namespace

VanishingMomentum::VanishingMomentum(double magnitude, double tol, const std::string& context)
    : Error(context + momentum_message(magnitude, tol)), magnitude_(magnitude) {}

HypothesisError::HypothesisError(std::string condition)
    : Error("hypothesis violated: " + condition), condition_(std::move(condition)) {}

ParseError::ParseError(int line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace kvlab
