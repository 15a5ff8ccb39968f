#include "perccode/params.hpp"


#include "perccode/errors.hpp"

namespace perccode {

ModelParams::ModelParams(double p) : p_(p), q_(1.0 - p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("percolation density p must lie in [0, 1], got " + format_real(p));
  }
}

}  // namespace perccode
