#include "natmodes/quarterwave.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace natmodes {

Stack quarterwave_stack(double n_ratio, int num_layers, Polarization polarization, double c) {
  if (!(n_ratio > 0.0) || !std::isfinite(n_ratio)) throw Error(ErrorKind::InvalidArgument, "n_ratio must be positive");
  if (num_layers < 1) throw Error(ErrorKind::InvalidArgument, "need at least one layer");
  Stack s;
  s.polarization = polarization;
  s.c = c;
  s.ambient_in = Material::constant(1.0);
  for (int j = 0; j < num_layers; ++j) {
    const double n = j % 2 == 0 ? n_ratio : 1.0;
    s.layers.push_back({Material::constant(n), 1.0 / n});
  }
  s.ambient_out = Material::constant(num_layers % 2 == 0 ? n_ratio : 1.0);
  return s;
}

std::vector<cplx> equal_phase_polynomial(const std::vector<cplx>& g) {
  if (g.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two media");
  // N and Z times exp(i (m-1) delta): each step multiplies the Z branch by x.
  std::vector<cplx> N{g[1] + g[0]}, Z{g[1] - g[0]};
  for (std::size_t m = 2; m < g.size(); ++m) {
    const cplx a = g[m] + g[m - 1];
    const cplx b = g[m] - g[m - 1];
    std::vector<cplx> Nn(N.size() + 1, 0.0), Zn(N.size() + 1, 0.0);
    for (std::size_t k = 0; k < N.size(); ++k) {
      Nn[k] += a * N[k];
      Nn[k + 1] += b * Z[k];
      Zn[k] += b * N[k];
      Zn[k + 1] += a * Z[k];
    }
    N = std::move(Nn), Z = std::move(Zn);
  }
  return N;
}

namespace {

struct Eval {
  cplx p, dp;
  double magnitude;  // sum |c_k| |x|^k, for relative residuals
};

Eval horner(const std::vector<cplx>& c, cplx x) {
  cplx p = 0.0, dp = 0.0;
  double mag = 0.0;
  const double ax = std::abs(x);
  for (std::size_t k = c.size(); k-- > 0;) {
    dp = dp * x + p;
    p = p * x + c[k];
    mag = mag * ax + std::abs(c[k]);
  }
  return {p, dp, mag};
}

}  // namespace

QuarterWaveModes quarterwave_modes(double n_ratio, int num_layers, std::pair<int, int> period_range,
                                   Polarization polarization) {
  if (n_ratio == 1.0) throw Error(ErrorKind::DegenerateRatio, "index ratio 1 leaves no interfaces");
  if (num_layers < 2 || num_layers % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "quarter-wave stacks need an even, positive number of layers");
  }
  if (period_range.first > period_range.second) throw Error(ErrorKind::InvalidArgument, "empty period range");
  const Stack stack = quarterwave_stack(n_ratio, num_layers, polarization);
  const LayerParams lp = layer_params(stack, cplx{1.0, 0.0});

  QuarterWaveModes out;
  out.coefficients = equal_phase_polynomial(lp.g);
  const auto& c = out.coefficients;
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1 || std::abs(c.back()) == 0.0) throw Error(ErrorKind::DegenerateRatio, "polynomial collapsed");

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "companion eigenvalues failed");

  for (int i = 0; i < n; ++i) {
    cplx x = solver.eigenvalues()[i];
    for (int it = 0; it < 8; ++it) {
      const Eval e = horner(c, x);
      if (e.dp == 0.0) break;
      const cplx step = e.p / e.dp;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::abs(x)) break;
    }
    const Eval e = horner(c, x);
    const double residual = std::abs(e.p) / e.magnitude;
    if (!(residual < 1e-10)) throw Error(ErrorKind::NoConvergence, "polynomial root residual above 1e-10");
    out.x_roots.push_back(x);

    // delta = -(i/2) Log x, shifted into [0, pi).
    double re = 0.5 * std::arg(x);
    if (re < 0.0) re += std::numbers::pi;
    const double im = -0.5 * std::log(std::abs(x));
    for (int k = period_range.first; k <= period_range.second; ++k) {
      out.modes.modes.push_back({cplx{re + k * std::numbers::pi, im}, 1, ModeMethod::ExactPolynomial, residual});
    }
  }
  sort_modes(out.modes.modes);
  out.modes.stack_fingerprint = fingerprint(stack);
  out.modes.winding_total = out.modes.total_multiplicity();
  return out;
}

std::optional<std::pair<double, double>> root_gap(const std::vector<Mode>& delta_modes, double center) {
  std::optional<double> lo, hi;
  for (const auto& m : delta_modes) {
    const double re = m.omega.real();
    if (re == center) return std::nullopt;
    if (re < center && (!lo || re > *lo)) lo = re;
    if (re > center && (!hi || re < *hi)) hi = re;
  }
  if (!lo || !hi) return std::nullopt;
  return std::make_pair(*lo, *hi);
}

}  // namespace natmodes
