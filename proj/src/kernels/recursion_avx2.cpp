// AVX2 + FMA variant of the batched interface recursion. Four frequencies
// per register; the remainder goes through the scalar kernel on a tail view.

#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "natmodes/kernels.hpp"

namespace natmodes::kernels {

namespace {

struct CVec {
  __m256d re, im;
};

inline CVec cmul(CVec a, CVec b) {
  return {_mm256_fmsub_pd(a.re, b.re, _mm256_mul_pd(a.im, b.im)),
          _mm256_fmadd_pd(a.re, b.im, _mm256_mul_pd(a.im, b.re))};
}

inline CVec cadd(CVec a, CVec b) { return {_mm256_add_pd(a.re, b.re), _mm256_add_pd(a.im, b.im)}; }

inline CVec load(const std::vector<double>& re, const std::vector<double>& im, std::size_t at) {
  return {_mm256_loadu_pd(re.data() + at), _mm256_loadu_pd(im.data() + at)};
}

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

// 2^-floor(log2 x) per lane (1 for zero/subnormal lanes); accumulates the
// exponent into e2. Mirrors detail::pow2_inverse.
inline __m256d pow2_inverse(__m256d x, __m256d& e2) {
  const __m256i mask = _mm256_set1_epi64x(0x7FF0000000000000LL);
  const __m256i bits = _mm256_and_si256(_mm256_castpd_si256(x), mask);
  const __m256i zero = _mm256_cmpeq_epi64(bits, _mm256_setzero_si256());
  const __m256i inv = _mm256_sub_epi64(_mm256_set1_epi64x(0x7FE0000000000000LL), bits);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d scale = _mm256_blendv_pd(_mm256_castsi256_pd(inv), one, _mm256_castsi256_pd(zero));
  // Biased exponent to double via the 2^52 magic-number trick.
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);
  const __m256d as_double =
      _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
  const __m256d unbiased = _mm256_sub_pd(as_double, _mm256_set1_pd(1023.0));
  e2 = _mm256_add_pd(e2, _mm256_blendv_pd(unbiased, _mm256_setzero_pd(), _mm256_castsi256_pd(zero)));
  return scale;
}

inline CVec scale(CVec a, __m256d s) { return {_mm256_mul_pd(a.re, s), _mm256_mul_pd(a.im, s)}; }

inline __m256d norm_inf(CVec a, CVec b) {
  return _mm256_max_pd(_mm256_max_pd(vabs(a.re), vabs(a.im)), _mm256_max_pd(vabs(b.re), vabs(b.im)));
}

}  // namespace

void wolter_batch_avx2(const RecursionBatch& in, RecursionOutput& out) {
  const std::size_t P = in.points;
  out.resize(P);
  const std::size_t vec_end = P - P % 4;
  const __m256d two = _mm256_set1_pd(2.0);
  for (std::size_t p = 0; p < vec_end; p += 4) {
    const CVec g0 = load(in.g_re, in.g_im, p);
    const CVec g1 = load(in.g_re, in.g_im, P + p);
    CVec z{_mm256_sub_pd(g1.re, g0.re), _mm256_sub_pd(g1.im, g0.im)};
    CVec n = cadd(g1, g0);
    CVec t{_mm256_mul_pd(two, g0.re), _mm256_mul_pd(two, g0.im)};
    __m256d e2 = _mm256_setzero_pd();
    {
      const __m256d s = pow2_inverse(norm_inf(z, n), e2);
      z = scale(z, s), n = scale(n, s), t = scale(t, s);
    }
    for (std::size_t m = 2; m < in.media; ++m) {
      const std::size_t l = (m - 2) * P + p;
      const CVec gp = load(in.g_re, in.g_im, m * P + p);
      const CVec gm = load(in.g_re, in.g_im, (m - 1) * P + p);
      const CVec a = cadd(gp, gm);
      const CVec b{_mm256_sub_pd(gp.re, gm.re), _mm256_sub_pd(gp.im, gm.im)};
      const CVec en = cmul(load(in.em_re, in.em_im, l), n);
      const CVec ez = cmul(load(in.ep_re, in.ep_im, l), z);
      const CVec zn = cadd(cmul(b, en), cmul(a, ez));
      const CVec nn = cadd(cmul(a, en), cmul(b, ez));
      const __m256d dec = _mm256_mul_pd(two, _mm256_loadu_pd(in.decay.data() + l));
      const CVec f{_mm256_mul_pd(dec, gm.re), _mm256_mul_pd(dec, gm.im)};
      const CVec tn = cmul(f, t);
      const __m256d s = pow2_inverse(norm_inf(zn, nn), e2);
      z = scale(zn, s), n = scale(nn, s), t = scale(tn, s);
    }
    _mm256_storeu_pd(out.Z_re.data() + p, z.re);
    _mm256_storeu_pd(out.Z_im.data() + p, z.im);
    _mm256_storeu_pd(out.N_re.data() + p, n.re);
    _mm256_storeu_pd(out.N_im.data() + p, n.im);
    _mm256_storeu_pd(out.T_re.data() + p, t.re);
    _mm256_storeu_pd(out.T_im.data() + p, t.im);
    const __m256d ls = _mm256_fmadd_pd(e2, _mm256_set1_pd(std::numbers::ln2), _mm256_loadu_pd(in.shift_total.data() + p));
    _mm256_storeu_pd(out.log_scale.data() + p, ls);
  }
  if (vec_end == P) return;

  // Tail: copy the remaining points into a small batch for the scalar kernel.
  const std::size_t rest = P - vec_end;
  RecursionBatch tail;
  tail.resize(rest, in.media);
  const std::size_t layers = in.media - 2;
  for (std::size_t q = 0; q < rest; ++q) {
    for (std::size_t m = 0; m < in.media; ++m) {
      tail.g_re[m * rest + q] = in.g_re[m * P + vec_end + q];
      tail.g_im[m * rest + q] = in.g_im[m * P + vec_end + q];
    }
    for (std::size_t l = 0; l < layers; ++l) {
      tail.ep_re[l * rest + q] = in.ep_re[l * P + vec_end + q];
      tail.ep_im[l * rest + q] = in.ep_im[l * P + vec_end + q];
      tail.em_re[l * rest + q] = in.em_re[l * P + vec_end + q];
      tail.em_im[l * rest + q] = in.em_im[l * P + vec_end + q];
      tail.decay[l * rest + q] = in.decay[l * P + vec_end + q];
    }
    tail.shift_total[q] = in.shift_total[vec_end + q];
  }
  RecursionOutput tail_out;
  wolter_batch_scalar(tail, tail_out);
  for (std::size_t q = 0; q < rest; ++q) {
    out.Z_re[vec_end + q] = tail_out.Z_re[q], out.Z_im[vec_end + q] = tail_out.Z_im[q];
    out.N_re[vec_end + q] = tail_out.N_re[q], out.N_im[vec_end + q] = tail_out.N_im[q];
    out.T_re[vec_end + q] = tail_out.T_re[q], out.T_im[vec_end + q] = tail_out.T_im[q];
    out.log_scale[vec_end + q] = tail_out.log_scale[q];
  }
}

}  // namespace natmodes::kernels
