#include <cmath>
#include <numbers>

#include "natmodes/error.hpp"
#include "natmodes/kernels.hpp"
#include "pow2.hpp"

namespace natmodes::kernels {

double ScaledComplex::log_abs() const {
  return std::log(std::abs(mantissa)) + exponent * std::numbers::ln2;
}

std::complex<double> ScaledComplex::value() const {
  const double clamped = std::fmax(std::fmin(exponent, 1e6), -1e6);
  const int e = static_cast<int>(clamped);
  return {std::ldexp(mantissa.real(), e), std::ldexp(mantissa.imag(), e)};
}

namespace {

// Factors between renormalisations. Each factor is bounded by 1 + |z mu|, so
// four of them stay finite for |z mu| up to about 1e75.
constexpr std::size_t kRenormEvery = 4;

}  // namespace

void product_scalar(std::span<const double> mu_re, std::span<const double> mu_im,
                    std::span<const std::complex<double>> z, std::span<ScaledComplex> out) {
  using detail::abs_max;
  using detail::pow2_inverse;
  if (mu_re.size() != mu_im.size() || z.size() != out.size()) {
    throw Error(ErrorKind::InvalidArgument, "product kernel: mismatched spans");
  }
  const std::size_t count = mu_re.size();
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double zr = z[k].real(), zi = z[k].imag();
    double ar = 1.0, ai = 0.0, e2 = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      const double fr = 1.0 - (zr * mu_re[j] - zi * mu_im[j]);
      const double fi = -(zr * mu_im[j] + zi * mu_re[j]);
      const double nr = ar * fr - ai * fi;
      const double ni = ar * fi + ai * fr;
      ar = nr, ai = ni;
      if ((j + 1) % kRenormEvery == 0) {
        const double s = pow2_inverse(abs_max(ar, ai), e2);
        ar *= s, ai *= s;
      }
    }
    const double s = pow2_inverse(abs_max(ar, ai), e2);
    out[k].mantissa = {ar * s, ai * s};
    out[k].exponent = e2;
  }
}

}  // namespace natmodes::kernels
