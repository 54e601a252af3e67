#pragma once

#include <vector>

#include "natmodes/modefinder.hpp"

namespace natmodes {

struct NearResonanceFamily {
  std::size_t layer_index = 1;  // 1-based layer the resonance belongs to
  cplx pole{};
  int m = 1;
  cplx omega_approx{};
};

/// Roots of sin(omega d n(omega) / c) = 0 with 1 neglected against the
/// Lorentz term: (f d^2/c^2 + m^2 pi^2) w^2 + i m^2 pi^2 Gamma w - m^2 pi^2 w0^2 = 0.
/// Returns the fourth-quadrant root for every m in [m_min, m_max].
std::vector<NearResonanceFamily> near_resonance_modes_slab(const Material& material, double d, int m_min, int m_max,
                                                           double c = 1.0);

/// Left-hand side of the generating quadratic, for residual checks.
cplx near_resonance_equation(const Material& material, double d, int m, cplx omega, double c = 1.0);

enum class ResonantLayer { First, Second };

/// Near-resonance families of a two-layer stack. Second: the slab reduction
/// applied to layer 2. First: Newton on
///   sin(n1 d1 w/c) cos(n2 d2 w/c) + n2 cos(n1 d1 w/c) sin(n2 d2 w/c) = 0
/// with n2 evaluated exactly. Layer 1 must be Lorentz; layer 2 may be any
/// material for `First`. Throws NoConvergence naming the failing m.
std::vector<NearResonanceFamily> two_layer_near_resonance(const Stack& stack, ResonantLayer which, int m_min,
                                                          int m_max);

/// The First-family equation above, exposed for residual checks.
cplx two_layer_first_equation(const Stack& stack, cplx omega);

struct AsymptoticFamily {
  double A = 0.0;
  double d = 0.0;
  int m = 0;
  cplx omega{};
  /// |sin((1/i) log(4 w^2/A) + (w - A/(2w)) d/c)| at omega.
  double rarified_residual = 0.0;
};

/// omega_m = (c/d)(m pi - (1/i) log(4 m^2 pi^2 / (A d^2))), principal log,
/// exactly as printed. Its imaginary part is positive; decaying modes
/// under exp(-i omega t) are the conjugates. Rejects m = 0.
std::vector<AsymptoticFamily> asymptotic_modes(double A, double d, const std::vector<int>& ms, double c = 1.0);

cplx rarified_equation(double A, double d, cplx omega, double c = 1.0);

struct CensusRow {
  double radius = 0.0;
  int count = 0;
  double density = 0.0;  // count / (pi radius^2)
};

/// Modes within each radius of the pole. radii must be strictly decreasing.
std::vector<CensusRow> cluster_census(const std::vector<Mode>& modes, cplx pole, const std::vector<double>& radii);

/// Counts never decrease as the radius grows.
bool census_counts_monotone(const std::vector<CensusRow>& rows);
/// Density strictly increases toward the pole (rows ordered by decreasing radius).
bool census_density_increasing(const std::vector<CensusRow>& rows);

/// Distance-to-root estimate |N / N'| at omega, from the scaled recursion
/// output (log-derivative by central difference).
double newton_correction(const Stack& stack, cplx omega);

/// N(omega) of a non-dispersive normal-incidence stack expanded as
/// sum_p A_p exp(i tau_p omega) with real, merged, increasing tau_p.
struct ExponentialSum {
  std::vector<double> tau;
  std::vector<cplx> coeff;
  cplx operator()(cplx omega) const;
};

ExponentialSum expand_denominator(const Stack& stack);

/// Zero-distribution bounds for an exponential sum.
struct LangerBounds {
  double spread = 0.0;  // B_J = tau_J - tau_0
  int terms = 0;        // J + 1
  double im_lower = 0.0;
  double im_upper = 0.0;

  double count_lower(double length) const;
  double count_upper(double length) const;
};

LangerBounds langer_bounds(const ExponentialSum& sum);

}  // namespace natmodes
