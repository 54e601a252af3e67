#pragma once

#include <array>
#include <complex>
#include <string>
#include <variant>

namespace natmodes {

using cplx = std::complex<double>;

/// Frequency-independent refractive index.
struct ConstantIndex {
  cplx n{1.0, 0.0};
};

/// Single-resonance Lorentz oscillator, n^2 = 1 + f / (omega0^2 - omega^2 - i gamma omega).
struct LorentzOscillator {
  double f = 0.0;
  double omega0 = 1.0;
  double gamma = 0.0;
};

/// Optical material. Constructed through the named factories, which enforce
/// the parameter invariants (f > 0, omega0 > 0, gamma >= 0, n != 0).
class Material {
 public:
  Material() = default;

  static Material constant(cplx n);
  static Material lorentz(double f, double omega0, double gamma);

  bool is_dispersive() const noexcept { return std::holds_alternative<LorentzOscillator>(model_); }
  const ConstantIndex& as_constant() const;
  const LorentzOscillator& as_lorentz() const;

  std::string describe() const;

 private:
  std::variant<ConstantIndex, LorentzOscillator> model_{};
};

/// Units of the global frequency scale. Internally c is the only number that
/// matters; omega_unit is carried into output headers.
struct FrequencyScale {
  double c = 1.0;
  std::string omega_unit = "omega0";
};

/// n^2(omega). Throws PoleEvaluation when the Lorentz denominator vanishes.
cplx eval_n2(const Material& material, cplx omega);

/// Principal square root of n^2(omega), cut along the negative real axis of n^2.
/// Constant materials return their index unchanged.
cplx eval_n(const Material& material, cplx omega);

/// The two roots of omega0^2 - omega^2 - i gamma omega, ordered (+Re, -Re).
std::array<cplx, 2> pole_frequencies(const Material& material);

/// Zeros of n^2 (branch points of n), ordered like pole_frequencies.
std::array<cplx, 2> branch_points(const Material& material);

/// Coefficient A of the large-|omega| expansion n = 1 - A/(2 omega^2) + O(omega^-3).
double high_freq_coefficient(const Material& material);

}  // namespace natmodes
