#ifndef TRIGKERNEL_ERRORS_HPP
#define TRIGKERNEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace trigkernel {

// Invalid user input (bad shapes, bad hyperparameters, malformed files)
// is reported with std::invalid_argument.  NumericalError is reserved for
// failures of the numerics themselves: Cholesky breakdown after the jitter
// ladder, non-PSD conditional covariances, non-convergent quadrature.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trigkernel

#endif  // TRIGKERNEL_ERRORS_HPP
