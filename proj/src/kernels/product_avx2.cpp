// AVX2 + FMA variant of the factor product. Vectorised across evaluation
// points: four z values share each broadcast reciprocal eigenvalue. The
// per-point operation order follows the scalar reference; FMA contraction
// makes the results differ from it by rounding only.

#include <immintrin.h>

#include "natmodes/error.hpp"
#include "natmodes/kernels.hpp"

namespace natmodes::kernels {

namespace {

constexpr std::size_t kRenormEvery = 4;

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline __m256d pow2_inverse(__m256d x, __m256d& e2) {
  const __m256i mask = _mm256_set1_epi64x(0x7FF0000000000000LL);
  const __m256i bits = _mm256_and_si256(_mm256_castpd_si256(x), mask);
  const __m256i zero = _mm256_cmpeq_epi64(bits, _mm256_setzero_si256());
  const __m256i inv = _mm256_sub_epi64(_mm256_set1_epi64x(0x7FE0000000000000LL), bits);
  const __m256d scale = _mm256_blendv_pd(_mm256_castsi256_pd(inv), _mm256_set1_pd(1.0), _mm256_castsi256_pd(zero));
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);
  const __m256d as_double =
      _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
  const __m256d unbiased = _mm256_sub_pd(as_double, _mm256_set1_pd(1023.0));
  e2 = _mm256_add_pd(e2, _mm256_blendv_pd(unbiased, _mm256_setzero_pd(), _mm256_castsi256_pd(zero)));
  return scale;
}

}  // namespace

void product_avx2(std::span<const double> mu_re, std::span<const double> mu_im,
                  std::span<const std::complex<double>> z, std::span<ScaledComplex> out) {
  if (mu_re.size() != mu_im.size() || z.size() != out.size()) {
    throw Error(ErrorKind::InvalidArgument, "product kernel: mismatched spans");
  }
  const std::size_t count = mu_re.size();
  const std::size_t vec_end = z.size() - z.size() % 4;
  const __m256d one = _mm256_set1_pd(1.0);
  for (std::size_t k = 0; k < vec_end; k += 4) {
    const __m256d zr = _mm256_setr_pd(z[k].real(), z[k + 1].real(), z[k + 2].real(), z[k + 3].real());
    const __m256d zi = _mm256_setr_pd(z[k].imag(), z[k + 1].imag(), z[k + 2].imag(), z[k + 3].imag());
    __m256d ar = one, ai = _mm256_setzero_pd(), e2 = _mm256_setzero_pd();
    for (std::size_t j = 0; j < count; ++j) {
      const __m256d mr = _mm256_broadcast_sd(mu_re.data() + j);
      const __m256d mi = _mm256_broadcast_sd(mu_im.data() + j);
      // f = 1 - z * mu
      const __m256d fr = _mm256_sub_pd(one, _mm256_fmsub_pd(zr, mr, _mm256_mul_pd(zi, mi)));
      const __m256d fi = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_fmadd_pd(zr, mi, _mm256_mul_pd(zi, mr)));
      const __m256d nr = _mm256_fmsub_pd(ar, fr, _mm256_mul_pd(ai, fi));
      const __m256d ni = _mm256_fmadd_pd(ar, fi, _mm256_mul_pd(ai, fr));
      ar = nr, ai = ni;
      if ((j + 1) % kRenormEvery == 0) {
        const __m256d s = pow2_inverse(_mm256_max_pd(vabs(ar), vabs(ai)), e2);
        ar = _mm256_mul_pd(ar, s), ai = _mm256_mul_pd(ai, s);
      }
    }
    const __m256d s = pow2_inverse(_mm256_max_pd(vabs(ar), vabs(ai)), e2);
    ar = _mm256_mul_pd(ar, s), ai = _mm256_mul_pd(ai, s);
    alignas(32) double rr[4], ri[4], re2[4];
    _mm256_store_pd(rr, ar);
    _mm256_store_pd(ri, ai);
    _mm256_store_pd(re2, e2);
    for (int q = 0; q < 4; ++q) {
      out[k + q].mantissa = {rr[q], ri[q]};
      out[k + q].exponent = re2[q];
    }
  }
  if (vec_end < z.size()) {
    product_scalar(mu_re, mu_im, z.subspan(vec_end), out.subspan(vec_end));
  }
}

}  // namespace natmodes::kernels
