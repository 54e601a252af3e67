#include <cmath>
#include <limits>
#include <numbers>

#include "natmodes/completeness.hpp"

namespace natmodes {

namespace {

cplx initial_guess(cplx z) {
  const double e = std::numbers::e;
  const cplx q = e * z + 1.0;
  if (std::abs(q) < 0.3) {
    // Series about the branch point z = -1/e.
    const cplx p = std::sqrt(2.0 * q);
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (std::abs(z) < 3.0) return std::log(1.0 + z);
  const cplx L1 = std::log(z);
  const cplx L2 = std::log(L1);
  return L1 - L2 + L2 / L1;
}

}  // namespace

cplx lambert_w(cplx z, int branch) {
  if (branch != 0) throw Error(ErrorKind::Unsupported, "only the principal branch of W is implemented");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorKind::InvalidArgument, "lambert_w needs a finite argument");
  }
  if (z == 0.0) return 0.0;
  cplx w = initial_guess(z);
  // At the branch point itself the Halley denominator vanishes; the series is exact there.
  if (std::abs(std::numbers::e * z + 1.0) < 1e-14) return w;
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    const cplx ew = std::exp(w);
    const cplx f = w * ew - z;
    const cplx wp1 = w + 1.0;
    if (f == 0.0 || wp1 == 0.0) return w;
    const cplx step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    const double size = std::abs(step);
    if (size <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) return w;
    // Rounding noise: the step stopped shrinking at a tiny size.
    if (size <= 1e-13 * (1.0 + std::abs(w)) && size >= last) return w;
    last = size;
  }
  throw Error(ErrorKind::NoConvergence, "lambert_w: Halley iteration did not converge");
}

}  // namespace natmodes
