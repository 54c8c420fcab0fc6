#include "bkg/finite_difference.hpp"

#include <algorithm>

namespace bkg {

void FdPolicy::validate() const {
  if (!(h0 >= 1e-8 && h0 <= 1e-1)) {
    std::ostringstream os;
    os << "FdPolicy: step " << h0 << " outside [1e-8, 1e-1]";
    throw InputError(os.str());
  }
  if (richardson_levels < 0 || richardson_levels > 3)
    throw InputError("FdPolicy: richardson_levels must be in [0, 3]");
}

FdPolicy FdPolicy::scaled(double factor) const {
  FdPolicy p = *this;
  p.h0 = std::clamp(h0 * factor, 1e-8, 1e-1);
  return p;
}

}  // namespace bkg
