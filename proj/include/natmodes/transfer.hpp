#pragma once

#include <optional>
#include <span>
#include <vector>

#include "natmodes/dispersion.hpp"

namespace natmodes {

enum class Polarization { TE, TM };

struct Layer {
  Material material;
  double thickness = 0.0;
};

/// Planar stack: ambient_in | layers... | ambient_out. Media are non-magnetic.
struct Stack {
  Material ambient_in = Material::constant(1.0);
  std::vector<Layer> layers;
  Material ambient_out = Material::constant(1.0);
  Polarization polarization = Polarization::TE;
  double theta0 = 0.0;  // incidence angle in ambient_in, radians
  double c = 1.0;

  /// Throws InvalidArgument when an invariant is broken (no layers,
  /// non-positive thickness, oblique incidence with a dispersive layer, c <= 0).
  void validate() const;

  std::size_t media_count() const noexcept { return layers.size() + 2; }
  const Material& medium(std::size_t index) const;
  bool has_dispersive_layer() const noexcept;
};

/// Interface admittances g_m (index 0 = ambient_in) and layer phases delta_m
/// (index 0 = first layer) at one complex frequency.
struct LayerParams {
  std::vector<cplx> g;
  std::vector<cplx> delta;
  cplx omega{};
};

/// Reflection numerator Z, shared denominator N and transmission numerator
/// from the recursion. The three values are stored with a common positive
/// scale removed: true value = stored value * exp(log_scale). Ratios and
/// phases are unaffected by the scale.
struct TransferResult {
  cplx Z{};
  cplx N{};
  cplx t_numerator{};
  double log_scale = 0.0;

  cplx reflection() const { return Z / N; }
  cplx transmission() const { return t_numerator / N; }
};

LayerParams layer_params(const Stack& stack, cplx omega);

/// Runs the interface recursion on precomputed parameters. Accepts a bare
/// interface (g of size 2, no layers).
TransferResult wolter_recursion(const LayerParams& params);
TransferResult wolter_recursion(const Stack& stack, cplx omega);

/// Default tolerance below which N counts as zero: 1e-12 * (|Z| + 1) in the
/// scaled representation.
inline constexpr double kDenominatorZeroTol = 1e-12;

cplx reflection(const Stack& stack, cplx omega, double tol = kDenominatorZeroTol);
cplx transmission(const Stack& stack, cplx omega, double tol = kDenominatorZeroTol);

/// Power transmittance prefactor Re(g_out)/Re(g_in).
double flux_ratio(const LayerParams& params);

struct SpectrumRow {
  double omega = 0.0;
  double R = 0.0;
  double T = 0.0;
  bool is_peak = false;
  std::optional<double> fwhm;
};

/// R and T on a strictly increasing real grid, with transmission peaks
/// (interior local maxima of T) and their full width at half maximum.
std::vector<SpectrumRow> spectrum(const Stack& stack, std::span<const double> omega_grid);

}  // namespace natmodes
