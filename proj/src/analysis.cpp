#include "natmodes/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace natmodes {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Fourth-quadrant root of (f d^2/c^2 + M^2) w^2 + i M^2 Gamma w - M^2 w0^2 = 0.
cplx quadratic_root(const LorentzOscillator& L, double d, double c, cplx M) {
  const cplx M2 = M * M;
  const cplx a = L.f * d * d / (c * c) + M2;
  const cplx b = kI * M2 * L.gamma;
  const cplx cc = -M2 * L.omega0 * L.omega0;
  const cplx s = std::sqrt(b * b - 4.0 * a * cc);
  const cplx r1 = (-b + s) / (2.0 * a);
  const cplx r2 = (-b - s) / (2.0 * a);
  return r1.real() >= r2.real() ? r1 : r2;
}

}  // namespace

std::vector<NearResonanceFamily> near_resonance_modes_slab(const Material& material, double d, int m_min, int m_max,
                                                           double c) {
  const LorentzOscillator& L = material.as_lorentz();
  if (m_min < 1 || m_max < m_min) throw Error(ErrorKind::InvalidArgument, "m range must satisfy 1 <= m_min <= m_max");
  if (!(d > 0.0) || !(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "d and c must be positive");
  const cplx pole = pole_frequencies(material)[0];
  std::vector<NearResonanceFamily> out;
  for (int m = m_min; m <= m_max; ++m) out.push_back({1, pole, m, quadratic_root(L, d, c, m * kPi)});
  return out;
}

cplx near_resonance_equation(const Material& material, double d, int m, cplx omega, double c) {
  const LorentzOscillator& L = material.as_lorentz();
  const cplx x = omega * d / c;
  const double mp2 = m * m * kPi * kPi;
  return x * x * L.f - mp2 * (L.omega0 * L.omega0 - omega * omega - kI * L.gamma * omega);
}

cplx two_layer_first_equation(const Stack& stack, cplx omega) {
  if (stack.layers.size() != 2) throw Error(ErrorKind::InvalidArgument, "two-layer stack required");
  const cplx n1 = eval_n(stack.layers[0].material, omega);
  const cplx n2 = eval_n(stack.layers[1].material, omega);
  const cplx a = n1 * stack.layers[0].thickness * omega / stack.c;
  const cplx b = n2 * stack.layers[1].thickness * omega / stack.c;
  return std::sin(a) * std::cos(b) + n2 * std::cos(a) * std::sin(b);
}

std::vector<NearResonanceFamily> two_layer_near_resonance(const Stack& stack, ResonantLayer which, int m_min,
                                                          int m_max) {
  stack.validate();
  if (stack.layers.size() != 2) throw Error(ErrorKind::InvalidArgument, "two-layer stack required");
  const Layer& l1 = stack.layers[0];
  const Layer& l2 = stack.layers[1];
  if (which == ResonantLayer::Second) {
    if (l1.material.is_dispersive() && l2.material.is_dispersive() &&
        l1.material.as_lorentz().omega0 == l2.material.as_lorentz().omega0) {
      throw Error(ErrorKind::InvalidArgument, "layers need distinct resonance frequencies");
    }
    auto out = near_resonance_modes_slab(l2.material, l2.thickness, m_min, m_max, stack.c);
    for (auto& f : out) f.layer_index = 2;
    return out;
  }

  const LorentzOscillator& L = l1.material.as_lorentz();
  if (m_min < 1 || m_max < m_min) throw Error(ErrorKind::InvalidArgument, "m range must satisfy 1 <= m_min <= m_max");
  const cplx pole = pole_frequencies(l1.material)[0];
  // Phase shift contributed by layer 2, frozen at the pole.
  const cplx w0{pole.real(), 0.0};
  const cplx n2 = eval_n(l2.material, w0);
  const cplx theta = std::atan(n2 * std::tan(n2 * l2.thickness * w0 / stack.c));

  std::vector<NearResonanceFamily> out;
  for (int m = m_min; m <= m_max; ++m) {
    cplx w = quadratic_root(L, l1.thickness, stack.c, m * kPi - theta);
    bool converged = false;
    for (int it = 0; it < 100 && !converged; ++it) {
      const double h = 1e-7 * std::abs(w - pole);
      const cplx F = two_layer_first_equation(stack, w);
      const cplx dF = (two_layer_first_equation(stack, w + h) - two_layer_first_equation(stack, w - h)) / (2.0 * h);
      cplx step = F / dF;
      const double cap = 0.5 * std::abs(w - pole);
      if (std::abs(step) > cap) step *= cap / std::abs(step);
      w -= step;
      if (!std::isfinite(std::abs(w))) break;
      converged = std::abs(step) <= 1e-14 * std::abs(w);
    }
    if (!converged) {
      throw Error(ErrorKind::NoConvergence, "first-layer family: Newton failed for m = " + std::to_string(m));
    }
    out.push_back({1, pole, m, w});
  }
  return out;
}

cplx rarified_equation(double A, double d, cplx omega, double c) {
  return std::sin(-kI * std::log(4.0 * omega * omega / A) + (omega - A / (2.0 * omega)) * d / c);
}

std::vector<AsymptoticFamily> asymptotic_modes(double A, double d, const std::vector<int>& ms, double c) {
  if (!(A > 0.0)) throw Error(ErrorKind::InvalidArgument, "A must be positive");
  if (!(d > 0.0) || !(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "d and c must be positive");
  std::vector<AsymptoticFamily> out;
  for (int m : ms) {
    if (m == 0) throw Error(ErrorKind::InvalidArgument, "asymptotic family excludes m = 0");
    const double mp = m * kPi;
    const cplx omega = (c / d) * (mp - (1.0 / kI) * std::log(cplx{4.0 * mp * mp / (A * d * d), 0.0}));
    out.push_back({A, d, m, omega, std::abs(rarified_equation(A, d, omega, c))});
  }
  return out;
}

std::vector<CensusRow> cluster_census(const std::vector<Mode>& modes, cplx pole, const std::vector<double>& radii) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "census radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw Error(ErrorKind::InvalidArgument, "census radii must decrease");
  }
  std::vector<CensusRow> rows;
  for (double r : radii) {
    int count = 0;
    for (const auto& m : modes) {
      if (std::abs(m.omega - pole) <= r) count += m.multiplicity;
    }
    rows.push_back({r, count, count / (kPi * r * r)});
  }
  return rows;
}

bool census_counts_monotone(const std::vector<CensusRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].count > rows[i - 1].count) return false;
  }
  return true;
}

bool census_density_increasing(const std::vector<CensusRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].density > rows[i - 1].density)) return false;
  }
  return !rows.empty();
}

double newton_correction(const Stack& stack, cplx omega) {
  auto log_n = [&](cplx w) {
    const TransferResult r = wolter_recursion(stack, w);
    return std::make_pair(r.N, r.log_scale);
  };
  auto dlog = [&](double h) {
    const auto [np, sp] = log_n(omega + h);
    const auto [nm, sm] = log_n(omega - h);
    const cplx diff = std::log(np / nm) + (sp - sm);
    return diff / (2.0 * h);
  };
  // Shrink the step until two successive estimates agree.
  double h = 1e-6 * std::max(1.0, std::abs(omega));
  cplx prev = dlog(h);
  for (int i = 0; i < 12; ++i) {
    h *= 0.25;
    const cplx cur = dlog(h);
    if (std::abs(cur - prev) <= 1e-6 * std::abs(cur)) return 1.0 / std::abs(cur);
    prev = cur;
  }
  return 1.0 / std::abs(prev);
}

cplx ExponentialSum::operator()(cplx omega) const {
  cplx s = 0.0;
  for (std::size_t p = 0; p < tau.size(); ++p) s += coeff[p] * std::exp(kI * tau[p] * omega);
  return s;
}

namespace {

using Terms = std::vector<std::pair<double, cplx>>;

void merge_terms(Terms& t, double tol) {
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Terms out;
  for (const auto& term : t) {
    if (!out.empty() && std::abs(term.first - out.back().first) <= tol) {
      out.back().second += term.second;
    } else {
      out.push_back(term);
    }
  }
  t = std::move(out);
}

}  // namespace

ExponentialSum expand_denominator(const Stack& stack) {
  stack.validate();
  if (stack.theta0 != 0.0) throw Error(ErrorKind::Unsupported, "exponential expansion needs normal incidence");
  std::vector<cplx> g(stack.media_count());
  std::vector<double> kappa(stack.layers.size());
  double total = 0.0;
  for (std::size_t m = 0; m < g.size(); ++m) {
    const Material& mat = stack.medium(m);
    if (mat.is_dispersive()) throw Error(ErrorKind::Unsupported, "exponential expansion needs constant indices");
    const cplx n = mat.as_constant().n;
    g[m] = stack.polarization == Polarization::TE ? n : 1.0 / n;
    if (m >= 1 && m <= stack.layers.size()) {
      if (n.imag() != 0.0) throw Error(ErrorKind::InvalidArgument, "exponential expansion needs real layer indices");
      kappa[m - 1] = n.real() * stack.layers[m - 1].thickness / stack.c;
      total += std::abs(kappa[m - 1]);
    }
  }
  const double tol = 1e-12 * std::max(1.0, total);
  Terms N{{0.0, g[1] + g[0]}}, Z{{0.0, g[1] - g[0]}};
  for (std::size_t m = 2; m < g.size(); ++m) {
    const cplx a = g[m] + g[m - 1];
    const cplx b = g[m] - g[m - 1];
    const double k = kappa[m - 2];
    Terms Nn, Zn;
    for (const auto& [tau, c] : N) {
      Nn.push_back({tau - k, a * c});
      Zn.push_back({tau - k, b * c});
    }
    for (const auto& [tau, c] : Z) {
      Nn.push_back({tau + k, b * c});
      Zn.push_back({tau + k, a * c});
    }
    merge_terms(Nn, tol);
    merge_terms(Zn, tol);
    N = std::move(Nn), Z = std::move(Zn);
  }
  double cmax = 0.0;
  for (const auto& t : N) cmax = std::max(cmax, std::abs(t.second));
  ExponentialSum out;
  for (const auto& [tau, c] : N) {
    if (std::abs(c) <= 1e-14 * cmax) continue;
    out.tau.push_back(tau);
    out.coeff.push_back(c);
  }
  return out;
}

double LangerBounds::count_lower(double length) const { return spread * length / (2.0 * kPi) - terms; }
double LangerBounds::count_upper(double length) const { return spread * length / (2.0 * kPi) + terms; }

LangerBounds langer_bounds(const ExponentialSum& sum) {
  const std::size_t J = sum.tau.size();
  if (J < 2) throw Error(ErrorKind::InvalidArgument, "exponential sum needs at least two terms");
  LangerBounds b;
  b.spread = sum.tau.back() - sum.tau.front();
  b.terms = static_cast<int>(J);
  // For Im w = y the term p has size |A_p| exp(-tau_p y). Above im_upper the
  // first term outweighs all others together, below im_lower the last does.
  double rest_first = 0.0, rest_last = 0.0;
  for (std::size_t p = 0; p < J; ++p) {
    if (p != 0) rest_first += std::abs(sum.coeff[p]);
    if (p != J - 1) rest_last += std::abs(sum.coeff[p]);
  }
  b.im_upper = std::max(0.0, std::log(rest_first / std::abs(sum.coeff.front())) / (sum.tau[1] - sum.tau[0]));
  b.im_lower = std::min(0.0, -std::log(rest_last / std::abs(sum.coeff.back())) / (sum.tau[J - 1] - sum.tau[J - 2]));
  return b;
}

}  // namespace natmodes
