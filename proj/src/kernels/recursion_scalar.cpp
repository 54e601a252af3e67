#include <cmath>
#include <numbers>

#include "natmodes/error.hpp"
#include "natmodes/kernels.hpp"
#include "pow2.hpp"

namespace natmodes::kernels {

void RecursionBatch::resize(std::size_t n_points, std::size_t n_media) {
  if (n_media < 2) throw Error(ErrorKind::InvalidArgument, "recursion needs at least two media");
  points = n_points;
  media = n_media;
  const std::size_t layers = n_media - 2;
  g_re.assign(n_media * n_points, 0.0);
  g_im.assign(n_media * n_points, 0.0);
  for (auto* v : {&ep_re, &ep_im, &em_re, &em_im, &decay}) v->assign(layers * n_points, 0.0);
  shift_total.assign(n_points, 0.0);
}

void RecursionOutput::resize(std::size_t n_points) {
  for (auto* v : {&Z_re, &Z_im, &N_re, &N_im, &T_re, &T_im, &log_scale}) v->assign(n_points, 0.0);
}

void wolter_batch_scalar(const RecursionBatch& in, RecursionOutput& out) {
  using detail::abs_max;
  using detail::pow2_inverse;
  const std::size_t P = in.points;
  out.resize(P);
  for (std::size_t p = 0; p < P; ++p) {
    const double g0r = in.g_re[p], g0i = in.g_im[p];
    const double g1r = in.g_re[P + p], g1i = in.g_im[P + p];
    double zr = g1r - g0r, zi = g1i - g0i;
    double nr = g1r + g0r, ni = g1i + g0i;
    double tr = 2.0 * g0r, ti = 2.0 * g0i;
    double e2 = 0.0;
    {
      const double s = pow2_inverse(abs_max(abs_max(zr, zi), abs_max(nr, ni)), e2);
      zr *= s, zi *= s, nr *= s, ni *= s, tr *= s, ti *= s;
    }
    for (std::size_t m = 2; m < in.media; ++m) {
      const std::size_t l = (m - 2) * P + p;
      const double gpr = in.g_re[m * P + p], gpi = in.g_im[m * P + p];
      const double gmr = in.g_re[(m - 1) * P + p], gmi = in.g_im[(m - 1) * P + p];
      const double ar = gpr + gmr, ai = gpi + gmi;
      const double br = gpr - gmr, bi = gpi - gmi;
      // em * N and ep * Z
      const double enr = in.em_re[l] * nr - in.em_im[l] * ni;
      const double eni = in.em_re[l] * ni + in.em_im[l] * nr;
      const double ezr = in.ep_re[l] * zr - in.ep_im[l] * zi;
      const double ezi = in.ep_re[l] * zi + in.ep_im[l] * zr;
      const double znr = (br * enr - bi * eni) + (ar * ezr - ai * ezi);
      const double zni = (br * eni + bi * enr) + (ar * ezi + ai * ezr);
      const double nnr = (ar * enr - ai * eni) + (br * ezr - bi * ezi);
      const double nni = (ar * eni + ai * enr) + (br * ezi + bi * ezr);
      const double fr = 2.0 * gmr * in.decay[l], fi = 2.0 * gmi * in.decay[l];
      const double tnr = fr * tr - fi * ti;
      const double tni = fr * ti + fi * tr;
      const double s = pow2_inverse(abs_max(abs_max(znr, zni), abs_max(nnr, nni)), e2);
      zr = znr * s, zi = zni * s, nr = nnr * s, ni = nni * s, tr = tnr * s, ti = tni * s;
    }
    out.Z_re[p] = zr, out.Z_im[p] = zi;
    out.N_re[p] = nr, out.N_im[p] = ni;
    out.T_re[p] = tr, out.T_im[p] = ti;
    out.log_scale[p] = in.shift_total[p] + e2 * std::numbers::ln2;
  }
}

}  // namespace natmodes::kernels
