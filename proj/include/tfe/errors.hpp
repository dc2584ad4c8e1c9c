#ifndef TFE_ERRORS_HPP
#define TFE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tfe {

enum class ErrorCode {
  singular_mobility,          // y^{N-1} m(f) underflowed in the flux division
  overflow_rescaling_disabled,// state exceeded threshold with rescaling off (n > 0)
  step_size_collapse,
  degenerate_origin,          // sh2 start with n > 0 and no mobility floor
  insufficient_samples,
  ill_conditioned_fit,
  no_bracket,
  indeterminate_residual,
  oscillatory_loss,           // growth structure lost before the matching radius
  phi_floor                   // oscillatory component inside the sign-change floor
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg, double where = 0.0)
      : std::runtime_error(msg), code(code), where(where) {}

  ErrorCode code;
  double where;  // coordinate (y, s or Y) at which the condition was hit, if any
};

}  // namespace tfe

#endif
