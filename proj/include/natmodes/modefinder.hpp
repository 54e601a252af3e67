#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "natmodes/error.hpp"
#include "natmodes/transfer.hpp"

namespace natmodes {

/// Axis-aligned rectangle in the complex frequency plane.
struct Rect {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;

  bool contains(cplx z) const noexcept {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  double width() const noexcept { return re_max - re_min; }
  double height() const noexcept { return im_max - im_min; }
  cplx center() const noexcept { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
};

struct SearchRegion {
  Rect rect;
  int max_depth = 40;
  double newton_tol = 1e-12;
  /// Radius of the disks removed around Lorentz poles. Unset means
  /// max(1e-3 * gamma, 1e-8) per material.
  std::optional<double> exclusion_radius;
  void validate() const;
};

enum class ModeMethod { ExactPolynomial, ContourNewton, Asymptotic, NearResonance };

const char* to_string(ModeMethod method) noexcept;

struct Mode {
  cplx omega{};
  int multiplicity = 1;
  ModeMethod method = ModeMethod::ContourNewton;
  double residual = 0.0;
};

struct UnresolvedCell {
  Rect rect;
  int count = 0;  // -1 when the cell touched an exclusion disk and was never counted
};

struct ModeSet {
  std::vector<Mode> modes;
  std::uint64_t stack_fingerprint = 0;
  /// Sum of the argument-principle counts of the searched cells.
  int winding_total = 0;
  std::vector<UnresolvedCell> unresolved;
  std::size_t cells_visited = 0;
  std::size_t cells_excluded = 0;

  int total_multiplicity() const noexcept;
};

/// Raised by find_modes when cells holding zeros could not be polished at
/// the depth limit; carries everything that was resolved.
class MaxDepthExceeded : public Error {
 public:
  explicit MaxDepthExceeded(ModeSet partial)
      : Error(ErrorKind::MaxDepthExceeded,
              std::to_string(partial.unresolved.size()) + " cell(s) unresolved at the depth limit"),
        partial_(std::move(partial)) {}
  const ModeSet& partial() const noexcept { return partial_; }

 private:
  ModeSet partial_;
};

struct ExclusionDisk {
  cplx center{};
  double radius = 0.0;
};

/// Disks around the poles of every dispersive layer.
std::vector<ExclusionDisk> exclusion_disks(const Stack& stack, std::optional<double> radius);

struct ContourOptions {
  /// Relative denominator size |N| / max(|N|, |Z|) below which a contour
  /// point counts as a zero.
  double zero_tol = 1e-10;
  int initial_samples_per_edge = 16;
};

/// Winding number of the recursion denominator around the rectangle
/// boundary. The interior-layer branch of n is divided out, so the count is
/// branch independent. Throws ContourThroughZero.
int count_zeros(const Stack& stack, const Rect& rect, const ContourOptions& options = {});

/// Normalised residual |N| / max(1, |Z|) at omega, evaluated in log space.
double mode_residual(const Stack& stack, cplx omega);

/// Inverse reflection coefficient N/Z: same zeros as N, free of the overall
/// scale and of the interior-layer branch choice. Newton runs on this.
cplx inverse_reflection(const Stack& stack, cplx omega);

/// Argument-principle quadrisection with Newton polishing. Modes are
/// deduplicated and sorted by (Re, Im, method). seed drives contour jitter.
ModeSet find_modes(const Stack& stack, const SearchRegion& region, std::uint64_t seed = 0);

void sort_modes(std::vector<Mode>& modes);

std::uint64_t fingerprint(const Stack& stack);
std::uint64_t fnv1a(const std::string& text, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace natmodes
