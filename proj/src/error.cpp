#include "chanvese/error.hpp"

#include <sstream>

namespace chanvese {

namespace {

std::string cfl_message(double tau, double max_tau) {
  std::ostringstream os;
  os << "time step tau=" << tau << " violates the CFL bound tau <= min(dx^2, dy^2)/2 = "
     << max_tau;
  return os.str();
}

std::string instability_message(int iteration, int x, int y) {
  std::ostringstream os;
  os << "non-finite level-set value at pixel (" << x << ", " << y << ")";
  if (iteration > 0) os << " in iteration " << iteration;
  return os.str();
}

}  // namespace

CflError::CflError(double tau, double max_tau)
    : ParameterError(cfl_message(tau, max_tau)), tau_(tau), max_tau_(max_tau) {}

NumericalInstabilityError::NumericalInstabilityError(int iteration, int x, int y)
    : Error(instability_message(iteration, x, y)), iteration_(iteration), x_(x), y_(y) {}

}  // namespace chanvese
