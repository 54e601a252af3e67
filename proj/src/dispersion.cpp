#include "natmodes/dispersion.hpp"

#include <cmath>
#include <sstream>

#include "natmodes/error.hpp"

namespace natmodes {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::PoleEvaluation: return "PoleEvaluation";
    case ErrorKind::NotDispersive: return "NotDispersive";
    case ErrorKind::DenominatorZero: return "DenominatorZero";
    case ErrorKind::ContourThroughZero: return "ContourThroughZero";
    case ErrorKind::MaxDepthExceeded: return "MaxDepthExceeded";
    case ErrorKind::DegenerateRatio: return "DegenerateRatio";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::EigenvalueHit: return "EigenvalueHit";
    case ErrorKind::RatioConditionViolated: return "RatioConditionViolated";
    case ErrorKind::FitUnstable: return "FitUnstable";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

Material Material::constant(cplx n) {
  if (n == cplx{0.0, 0.0} || !std::isfinite(n.real()) || !std::isfinite(n.imag())) {
    throw Error(ErrorKind::InvalidArgument, "constant refractive index must be finite and nonzero");
  }
  Material m;
  m.model_ = ConstantIndex{n};
  return m;
}

Material Material::lorentz(double f, double omega0, double gamma) {
  if (!(f > 0.0) || !(omega0 > 0.0) || !(gamma >= 0.0) || !std::isfinite(f) || !std::isfinite(omega0) ||
      !std::isfinite(gamma)) {
    throw Error(ErrorKind::InvalidArgument, "Lorentz material needs f > 0, omega0 > 0, gamma >= 0");
  }
  Material m;
  m.model_ = LorentzOscillator{f, omega0, gamma};
  return m;
}

const ConstantIndex& Material::as_constant() const {
  if (const auto* c = std::get_if<ConstantIndex>(&model_)) return *c;
  throw Error(ErrorKind::InvalidArgument, "material is not a constant index");
}

const LorentzOscillator& Material::as_lorentz() const {
  if (const auto* l = std::get_if<LorentzOscillator>(&model_)) return *l;
  throw Error(ErrorKind::NotDispersive, "material has a constant index");
}

std::string Material::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* c = std::get_if<ConstantIndex>(&model_)) {
    os << "constant(n=" << c->n.real() << (c->n.imag() < 0 ? "" : "+") << c->n.imag() << "i)";
  } else {
    const auto& l = std::get<LorentzOscillator>(model_);
    os << "lorentz(f=" << l.f << ",omega0=" << l.omega0 << ",gamma=" << l.gamma << ")";
  }
  return os.str();
}

namespace {

// Roots of omega^2 + i gamma omega - w2, i.e. -i gamma/2 +- sqrt(w2 - gamma^2/4).
std::array<cplx, 2> damped_roots(double w2, double gamma) {
  const cplx root = std::sqrt(cplx{w2 - 0.25 * gamma * gamma, 0.0});
  const cplx shift{0.0, -0.5 * gamma};
  return {shift + root, shift - root};
}

}  // namespace

cplx eval_n2(const Material& material, cplx omega) {
  if (!material.is_dispersive()) {
    const cplx n = material.as_constant().n;
    return n * n;
  }
  const auto& l = material.as_lorentz();
  // Factored form keeps full relative accuracy next to the poles.
  const auto poles = damped_roots(l.omega0 * l.omega0, l.gamma);
  const cplx den = -(omega - poles[0]) * (omega - poles[1]);
  if (den == cplx{0.0, 0.0}) {
    throw Error(ErrorKind::PoleEvaluation, "omega coincides with a Lorentz pole");
  }
  const cplx n2 = 1.0 + l.f / den;
  if (!std::isfinite(n2.real()) || !std::isfinite(n2.imag())) {
    throw Error(ErrorKind::PoleEvaluation, "n^2 overflows next to a Lorentz pole");
  }
  return n2;
}

cplx eval_n(const Material& material, cplx omega) {
  if (!material.is_dispersive()) return material.as_constant().n;
  return std::sqrt(eval_n2(material, omega));
}

std::array<cplx, 2> pole_frequencies(const Material& material) {
  const auto& l = material.as_lorentz();
  return damped_roots(l.omega0 * l.omega0, l.gamma);
}

std::array<cplx, 2> branch_points(const Material& material) {
  const auto& l = material.as_lorentz();
  return damped_roots(l.omega0 * l.omega0 + l.f, l.gamma);
}

double high_freq_coefficient(const Material& material) { return material.as_lorentz().f; }

}  // namespace natmodes
