#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "natmodes/modefinder.hpp"

namespace natmodes {

/// Alternating stack with equal optical thickness n_j d_j = 1 in every
/// layer, so all layer phases equal delta = omega / c. Media run
/// 1 | r | 1 | r | ... with the exit medium continuing the alternation.
Stack quarterwave_stack(double n_ratio, int num_layers, Polarization polarization = Polarization::TE, double c = 1.0);

/// Denominator of an equal-phase stack as a polynomial in x = exp(2 i delta),
/// coefficients in ascending order. g holds the media admittances.
std::vector<cplx> equal_phase_polynomial(const std::vector<cplx>& g);

struct QuarterWaveModes {
  std::vector<cplx> coefficients;  // ascending powers of x
  std::vector<cplx> x_roots;
  /// Roots mapped to the delta plane (stored in Mode::omega) with
  /// Re delta in [k pi, (k+1) pi) for each period index k.
  ModeSet modes;
  int degree() const noexcept { return static_cast<int>(coefficients.size()) - 1; }
};

/// Roots of the quarter-wave denominator polynomial by companion-matrix
/// eigenvalues, Newton polished to a relative residual below 1e-10.
/// Throws DegenerateRatio for n_ratio == 1.
QuarterWaveModes quarterwave_modes(double n_ratio, int num_layers, std::pair<int, int> period_range = {0, 0},
                                   Polarization polarization = Polarization::TE);

/// Largest root-free Re-delta interval containing `center`, bounded by the
/// nearest roots on either side. Empty when a root sits on center or no
/// root lies on one side.
std::optional<std::pair<double, double>> root_gap(const std::vector<Mode>& delta_modes, double center);

}  // namespace natmodes
