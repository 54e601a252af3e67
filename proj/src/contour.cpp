#include <cmath>
#include <numbers>
#include <vector>

#include "natmodes/error.hpp"
#include "natmodes/modefinder.hpp"

namespace natmodes {

namespace {

constexpr double kPi = std::numbers::pi;

struct Sample {
  cplx unit;                 // phase of N / prod g_j over dispersive interior layers
  std::vector<cplx> delta;   // phases of the dispersive interior layers
  std::vector<cplx> log_g;   // log admittances of the same layers
};

class PhaseFunction {
 public:
  PhaseFunction(const Stack& stack, double zero_tol) : stack_(stack), zero_tol_(zero_tol) {
    const LayerParams unit = layer_params(stack, cplx{1.0, 0.0});
    for (std::size_t m = 1; m <= stack.layers.size(); ++m) {
      if (stack.medium(m).is_dispersive()) {
        dispersive_.push_back(m);
      } else {
        // Constant layer: delta = kappa * omega.
        kappa_max_ = std::max(kappa_max_, std::abs(unit.delta[m - 1]));
      }
    }
  }

  Sample operator()(cplx omega) const {
    LayerParams lp;
    try {
      lp = layer_params(stack_, omega);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::PoleEvaluation) throw Error(ErrorKind::ContourThroughZero, "contour meets a pole");
      throw;
    }
    const TransferResult r = wolter_recursion(lp);
    const double an = std::abs(r.N);
    const double rel = an / std::max(an, std::abs(r.Z));
    if (!(rel >= zero_tol_) || !std::isfinite(rel)) {
      throw Error(ErrorKind::ContourThroughZero, "denominator vanishes on the contour");
    }
    Sample s;
    cplx v = r.N;
    for (std::size_t m : dispersive_) {
      v *= std::conj(lp.g[m]) / std::abs(lp.g[m]);
      s.delta.push_back(lp.delta[m - 1]);
      s.log_g.push_back(std::log(lp.g[m]));
    }
    s.unit = v / std::abs(v);
    return s;
  }

  // True when the layer phases and admittances barely move between the two
  // samples, so the denominator cannot wind unseen in between. Both are
  // compared modulo the sign flip of n across its branch cut.
  bool smooth(cplx a, cplx b, const Sample& fa, const Sample& fb) const {
    constexpr double lim = kPi / 4;
    if (kappa_max_ * std::abs(b - a) >= lim) return false;
    for (std::size_t j = 0; j < fa.delta.size(); ++j) {
      if (std::min(std::abs(fb.delta[j] - fa.delta[j]), std::abs(fb.delta[j] + fa.delta[j])) >= lim) return false;
      if (std::abs(std::remainder((fb.log_g[j] - fa.log_g[j]).imag(), kPi)) >= lim) return false;
      if (std::abs((fb.log_g[j] - fa.log_g[j]).real()) >= lim) return false;
    }
    return true;
  }

 private:
  const Stack& stack_;
  double zero_tol_;
  double kappa_max_ = 0.0;
  std::vector<std::size_t> dispersive_;
};

// Phase increment along [a, b], refined until every accepted piece moves
// the phase by less than pi/2 (checked at its midpoint).
double track(const PhaseFunction& f, cplx a, cplx b, const Sample& fa, const Sample& fb, double min_len) {
  const cplx m = 0.5 * (a + b);
  const Sample fm = f(m);
  const double d1 = std::arg(fm.unit * std::conj(fa.unit));
  const double d2 = std::arg(fb.unit * std::conj(fm.unit));
  if (std::abs(d1) < kPi / 4 && std::abs(d2) < kPi / 4 && f.smooth(a, m, fa, fm) && f.smooth(m, b, fm, fb)) {
    return d1 + d2;
  }
  if (std::abs(b - a) < min_len) {
    throw Error(ErrorKind::ContourThroughZero, "phase along the contour cannot be resolved");
  }
  return track(f, a, m, fa, fm, min_len) + track(f, m, b, fm, fb, min_len);
}

}  // namespace

int count_zeros(const Stack& stack, const Rect& rect, const ContourOptions& options) {
  if (!(rect.re_min < rect.re_max) || !(rect.im_min < rect.im_max)) {
    throw Error(ErrorKind::InvalidArgument, "count_zeros: empty rectangle");
  }
  stack.validate();
  const PhaseFunction f(stack, options.zero_tol);
  const cplx corners[4] = {{rect.re_min, rect.im_min},
                           {rect.re_max, rect.im_min},
                           {rect.re_max, rect.im_max},
                           {rect.re_min, rect.im_max}};
  const int K = std::max(options.initial_samples_per_edge, 1);
  std::vector<cplx> pts;
  pts.reserve(4 * K + 1);
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e], b = corners[(e + 1) % 4];
    for (int k = 0; k < K; ++k) pts.push_back(a + (b - a) * (static_cast<double>(k) / K));
  }
  pts.push_back(corners[0]);
  std::vector<Sample> s;
  s.reserve(pts.size());
  for (const cplx& p : pts) s.push_back(f(p));

  const double scale = std::max({1.0, std::abs(corners[0]), std::abs(corners[2])});
  const double min_len = 1e-13 * scale;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += track(f, pts[i], pts[i + 1], s[i], s[i + 1], min_len);

  const double turns = total / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.25) {
    throw Error(ErrorKind::ContourThroughZero, "non-integer winding along the contour");
  }
  if (rounded < 0) throw Error(ErrorKind::ContourThroughZero, "negative winding: contour encloses a singularity");
  return static_cast<int>(rounded);
}

cplx inverse_reflection(const Stack& stack, cplx omega) {
  const TransferResult r = wolter_recursion(stack, omega);
  return r.N / r.Z;
}

double mode_residual(const Stack& stack, cplx omega) {
  const TransferResult r = wolter_recursion(stack, omega);
  const double an = std::abs(r.N);
  if (an == 0.0) return 0.0;
  const double log_n = std::log(an) + r.log_scale;
  const double log_z = std::log(std::abs(r.Z)) + r.log_scale;
  return std::exp(log_n - std::max(0.0, log_z));
}

}  // namespace natmodes
