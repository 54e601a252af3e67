#include "natmodes/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kernels/pow2.hpp"
#include "natmodes/error.hpp"
#include "natmodes/kernels.hpp"
#include "transfer_batch.hpp"

namespace natmodes {

void Stack::validate() const {
  if (layers.empty()) throw Error(ErrorKind::InvalidArgument, "stack needs at least one layer");
  for (const auto& layer : layers) {
    if (!(layer.thickness > 0.0) || !std::isfinite(layer.thickness)) {
      throw Error(ErrorKind::InvalidArgument, "layer thickness must be positive and finite");
    }
  }
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "wave speed c must be positive");
  if (!std::isfinite(theta0) || std::abs(theta0) >= std::numbers::pi / 2) {
    throw Error(ErrorKind::InvalidArgument, "incidence angle must lie in (-pi/2, pi/2)");
  }
  const bool dispersive = has_dispersive_layer() || ambient_in.is_dispersive() || ambient_out.is_dispersive();
  if (dispersive && theta0 != 0.0) {
    throw Error(ErrorKind::Unsupported, "dispersive media are only supported at normal incidence");
  }
}

const Material& Stack::medium(std::size_t index) const {
  if (index == 0) return ambient_in;
  if (index <= layers.size()) return layers[index - 1].material;
  if (index == layers.size() + 1) return ambient_out;
  throw Error(ErrorKind::InvalidArgument, "medium index out of range");
}

bool Stack::has_dispersive_layer() const noexcept {
  return std::any_of(layers.begin(), layers.end(), [](const Layer& l) { return l.material.is_dispersive(); });
}

LayerParams layer_params(const Stack& stack, cplx omega) {
  const std::size_t media = stack.media_count();
  LayerParams out;
  out.omega = omega;
  out.g.resize(media);
  out.delta.resize(stack.layers.size());
  const double sin0 = std::sin(stack.theta0);
  const cplx n0 = eval_n(stack.ambient_in, omega);
  for (std::size_t m = 0; m < media; ++m) {
    const cplx n = eval_n(stack.medium(m), omega);
    cplx cos_t{1.0, 0.0};
    if (stack.theta0 != 0.0) {
      const cplx s = n0 * sin0 / n;
      cos_t = std::sqrt(1.0 - s * s);
    }
    out.g[m] = stack.polarization == Polarization::TE ? n * cos_t : cos_t / n;
    if (m >= 1 && m <= stack.layers.size()) {
      out.delta[m - 1] = n * stack.layers[m - 1].thickness * omega * cos_t / stack.c;
    }
  }
  return out;
}

namespace detail {

PhaseFactors phase_factors(cplx delta) {
  const double s = std::abs(delta.imag());
  const double c = std::cos(delta.real());
  const double sn = std::sin(delta.real());
  const double up = std::exp(-delta.imag() - s);
  const double down = std::exp(delta.imag() - s);
  return {cplx{up * c, up * sn}, cplx{down * c, -down * sn}, std::exp(-s), s};
}

void fill_batch(const Stack& stack, std::span<const cplx> omegas, kernels::RecursionBatch& batch) {
  const std::size_t P = omegas.size();
  const std::size_t media = stack.media_count();
  batch.resize(P, media);
  for (std::size_t p = 0; p < P; ++p) {
    const LayerParams lp = layer_params(stack, omegas[p]);
    for (std::size_t m = 0; m < media; ++m) {
      batch.g_re[m * P + p] = lp.g[m].real();
      batch.g_im[m * P + p] = lp.g[m].imag();
    }
    double total = 0.0;
    for (std::size_t l = 0; l < lp.delta.size(); ++l) {
      const PhaseFactors f = phase_factors(lp.delta[l]);
      batch.ep_re[l * P + p] = f.ep.real();
      batch.ep_im[l * P + p] = f.ep.imag();
      batch.em_re[l * P + p] = f.em.real();
      batch.em_im[l * P + p] = f.em.imag();
      batch.decay[l * P + p] = f.decay;
      total += f.shift;
    }
    batch.shift_total[p] = total;
  }
}

TransferResult batch_result(const kernels::RecursionOutput& out, std::size_t p) {
  return {cplx{out.Z_re[p], out.Z_im[p]}, cplx{out.N_re[p], out.N_im[p]}, cplx{out.T_re[p], out.T_im[p]},
          out.log_scale[p]};
}

}  // namespace detail

TransferResult wolter_recursion(const LayerParams& params) {
  using kernels::detail::abs_max;
  using kernels::detail::pow2_inverse;
  const auto& g = params.g;
  if (g.size() < 2 || params.delta.size() + 2 != g.size()) {
    throw Error(ErrorKind::InvalidArgument, "layer parameters: need media = layers + 2 >= 2");
  }
  // Same arithmetic as kernels::wolter_batch_scalar, one point at a time.
  cplx Z = g[1] - g[0];
  cplx N = g[1] + g[0];
  cplx T = 2.0 * g[0];
  double e2 = 0.0;
  double shift = 0.0;
  auto renormalise = [&] {
    const double s = pow2_inverse(abs_max(abs_max(Z.real(), Z.imag()), abs_max(N.real(), N.imag())), e2);
    Z *= s, N *= s, T *= s;
  };
  renormalise();
  for (std::size_t m = 2; m < g.size(); ++m) {
    const detail::PhaseFactors f = detail::phase_factors(params.delta[m - 2]);
    const cplx a = g[m] + g[m - 1];
    const cplx b = g[m] - g[m - 1];
    const cplx en = f.em * N;
    const cplx ez = f.ep * Z;
    const cplx Zn = b * en + a * ez;
    const cplx Nn = a * en + b * ez;
    T *= 2.0 * g[m - 1] * f.decay;
    Z = Zn, N = Nn;
    shift += f.shift;
    renormalise();
  }
  return {Z, N, T, shift + e2 * std::numbers::ln2};
}

TransferResult wolter_recursion(const Stack& stack, cplx omega) {
  return wolter_recursion(layer_params(stack, omega));
}

namespace {

void check_denominator(const TransferResult& r, double tol) {
  if (std::abs(r.N) < tol * (std::abs(r.Z) + 1.0)) {
    throw Error(ErrorKind::DenominatorZero, "recursion denominator vanishes; omega is a natural frequency");
  }
}

}  // namespace

cplx reflection(const Stack& stack, cplx omega, double tol) {
  const TransferResult r = wolter_recursion(stack, omega);
  check_denominator(r, tol);
  return r.reflection();
}

cplx transmission(const Stack& stack, cplx omega, double tol) {
  const TransferResult r = wolter_recursion(stack, omega);
  check_denominator(r, tol);
  return r.transmission();
}

double flux_ratio(const LayerParams& params) { return params.g.back().real() / params.g.front().real(); }

namespace {

// Vertex height of the parabola through three points.
double parabola_peak(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d0 = (y1 - y0) / (x1 - x0);
  const double d1 = (y2 - y1) / (x2 - x1);
  const double a = (d1 - d0) / (x2 - x0);
  if (!(a < 0.0)) return y1;
  const double b = d0 - a * (x0 + x1);
  const double xv = -b / (2.0 * a);
  const double yv = y1 + (xv - x1) * (a * (xv + x1) + b);
  return std::max(yv, y1);
}

std::optional<double> peak_fwhm(std::span<const double> x, const std::vector<SpectrumRow>& rows, std::size_t i) {
  const double top = parabola_peak(x[i - 1], rows[i - 1].T, x[i], rows[i].T, x[i + 1], rows[i + 1].T);
  const double half = 0.5 * top;
  std::optional<double> left, right;
  for (std::size_t k = i; k > 0; --k) {
    if (rows[k - 1].T < half) {
      const double t = (half - rows[k - 1].T) / (rows[k].T - rows[k - 1].T);
      left = x[k - 1] + t * (x[k] - x[k - 1]);
      break;
    }
  }
  for (std::size_t k = i; k + 1 < x.size(); ++k) {
    if (rows[k + 1].T < half) {
      const double t = (rows[k].T - half) / (rows[k].T - rows[k + 1].T);
      right = x[k] + t * (x[k + 1] - x[k]);
      break;
    }
  }
  if (left && right) return *right - *left;
  if (left) return 2.0 * (x[i] - *left);
  if (right) return 2.0 * (*right - x[i]);
  return std::nullopt;
}

}  // namespace

std::vector<SpectrumRow> spectrum(const Stack& stack, std::span<const double> omega_grid) {
  stack.validate();
  for (std::size_t i = 1; i < omega_grid.size(); ++i) {
    if (!(omega_grid[i] > omega_grid[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "spectrum grid must be strictly increasing");
    }
  }
  std::vector<SpectrumRow> rows(omega_grid.size());
  if (omega_grid.empty()) return rows;

  std::vector<cplx> omegas(omega_grid.begin(), omega_grid.end());
  kernels::RecursionBatch batch;
  detail::fill_batch(stack, omegas, batch);
  kernels::RecursionOutput out;
  kernels::wolter_batch(batch, out);

  const std::size_t P = omegas.size();
  const std::size_t last = stack.media_count() - 1;
  for (std::size_t p = 0; p < P; ++p) {
    const TransferResult r = detail::batch_result(out, p);
    const double ratio = batch.g_re[last * P + p] / batch.g_re[p];
    rows[p].omega = omega_grid[p];
    rows[p].R = std::norm(r.reflection());
    rows[p].T = ratio * std::norm(r.transmission());
  }
  for (std::size_t i = 1; i + 1 < P; ++i) {
    if (rows[i].T > rows[i - 1].T && rows[i].T >= rows[i + 1].T) {
      rows[i].is_peak = true;
      rows[i].fwhm = peak_fwhm(omega_grid, rows, i);
    }
  }
  return rows;
}

}  // namespace natmodes
