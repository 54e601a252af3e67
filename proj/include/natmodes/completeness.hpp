#pragma once

#include <span>
#include <string>
#include <vector>

#include "natmodes/dispersion.hpp"
#include "natmodes/modefinder.hpp"

namespace natmodes {

/// Principal branch of the Lambert W function by Halley iteration. Only
/// branch 0 is implemented. Throws NoConvergence after 100 iterations.
cplx lambert_w(cplx z, int branch = 0);

enum class ZMap {
  Identity,        // lambda = omega, for synthetic eigenvalue sets
  NearResonance,   // lambda = n(omega) omega d / c, the argument of the slab sine
  LargeFrequency,  // lambda = omega d / c
};

enum class TailModel { None, AsymptoticPairing };

const char* to_string(ZMap map) noexcept;
const char* to_string(TailModel tail) noexcept;

struct CanonicalProduct {
  std::vector<cplx> lambdas;
  ZMap z_map = ZMap::Identity;
  TailModel tail_model = TailModel::AsymptoticPairing;
  /// Pair the k-th positive-Re factor with the k-th negative-Re one and
  /// drop unmatched factors beyond the last pair. Implied by AsymptoticPairing.
  bool pair = true;
};

/// Product prepared for repeated evaluation: reciprocal eigenvalues in
/// evaluation order plus the fitted tail model.
class PreparedProduct {
 public:
  /// Throws InvalidArgument (lambda = 0, fewer than 100 factors) and
  /// RatioConditionViolated (|lambda_k| / (pi k) outside [0.5, 2] on the
  /// upper half of either side).
  explicit PreparedProduct(const CanonicalProduct& cp);

  /// F(z). Returns exactly 0 when z equals a retained eigenvalue and throws
  /// EigenvalueHit when it lies within 1e-12 of one without being equal.
  cplx operator()(cplx z) const;
  std::vector<cplx> evaluate(std::span<const cplx> z) const;

  /// log|F(z)|; throws EigenvalueHit for any z within 1e-12 of an eigenvalue.
  std::vector<double> log_abs(std::span<const cplx> z) const;

  /// Log of the tail correction, (2 e z - z^2) psi'(M + 1 + b/a) / a^2.
  cplx tail_log(cplx z) const;
  /// Size of the first neglected tail term, |z|^4 / (6 a^4 (M + b/a)^3).
  double tail_remainder(cplx z) const;

  std::size_t factors() const noexcept { return mu_re_.size(); }
  std::size_t pairs() const noexcept { return pairs_; }
  /// |lambda_k| / (pi k) for the outermost retained factor on the positive side.
  double outer_ratio() const noexcept { return outer_ratio_; }
  const std::vector<double>& positive_re() const noexcept { return positive_re_; }

 private:
  void check_hit(cplx z, bool allow_exact) const;

  std::vector<double> mu_re_, mu_im_;
  std::vector<cplx> lambdas_;
  std::vector<double> positive_re_;  // sorted Re of positive-side eigenvalues
  std::size_t pairs_ = 0;
  bool tail_ = false;
  double slope_ = 1.0, offset_ = 0.0;  // s_k = slope k + offset
  cplx centre_{};
  double outer_ratio_ = 0.0;
};

cplx eval_canonical_product(const CanonicalProduct& cp, cplx z);

enum class Completeness { Complete, Incomplete, Undetermined };
const char* to_string(Completeness c) noexcept;

struct ClassifyOptions {
  double x_min = 1.0;
  double x_max = 100.0;
  int per_decade = 50;
  double margin = 0.1;
  /// RMS of the log-log fit above which FitUnstable is raised.
  double max_fit_residual = 0.25;
};

struct CompletenessReport {
  double decay_exponent = 0.0;
  Completeness classification = Completeness::Undetermined;
  double fit_lo = 0.0, fit_hi = 0.0;
  double fit_residual = 0.0;
  std::size_t truncation = 0;
  TailModel tail_model = TailModel::None;
  ZMap z_map = ZMap::Identity;
  bool paley_wiener_ratio_check = false;
  std::string tail_source = "none";
  std::string note;
};

/// Fits log|F(x)| ~ p log x + C over the upper decade of the grid. Samples
/// sit at midpoints between consecutive real parts of positive eigenvalues,
/// where |F| follows its envelope and never vanishes.
CompletenessReport classify(const CanonicalProduct& cp, const ClassifyOptions& options = {});

enum class SyntheticSet { Sine, Cosine, CosineMinusOne };

/// lambda_m = m pi, (m - 1/2) pi, or the cosine set without lambda = pi/2;
/// `pairs` factors on each side.
CanonicalProduct synthetic_product(SyntheticSet set, std::size_t pairs,
                                   TailModel tail = TailModel::AsymptoticPairing);

struct ZMapParams {
  ZMap map = ZMap::LargeFrequency;
  double d = 1.0;
  double c = 1.0;
  Material material;  // dispersive layer, for NearResonance
};

cplx map_to_z(const ZMapParams& params, cplx omega);

/// Eigenvalues of a mode set under the z-map, extended by the matching
/// analytic family (asymptotic for LargeFrequency, near-resonance for
/// NearResonance) until `pairs` factors exist on each side. Decaying
/// (conjugate) signs are used for the asymptotic extension. Only modes with
/// Re omega >= 0 are read; the left half comes from the mirror -conj(omega).
/// A found eigenvalue covers family index m = round(Re lambda / pi); only
/// uncovered indices in 1..pairs are filled from the analytic family.
CanonicalProduct canonical_product_from_modes(const std::vector<Mode>& modes, const ZMapParams& params,
                                              std::size_t pairs, std::string* tail_source = nullptr);

struct LConstancyRow {
  double abs_z = 0.0;
  double abs_L = 0.0;
};

struct LConstancyReport {
  std::vector<LConstancyRow> rows;
  double relative_variation = 0.0;  // (max - min) / mean of |L|
  double bound = 0.0;               // (16/pi) W(sqrt(A) d / 2) + 8 pi^3 / (A d^2)
  bool within_bound = false;        // every |log|L|| <= bound
  double max_tail_remainder = 0.0;
  std::size_t truncation = 0;
};

/// lambda_m = m pi + i log(4 m^2 pi^2 / (A d^2)), m = +-1..+-M, evaluated on
/// real z with paired factors. Throws TruncationTooSmall when the tail
/// remainder exceeds 1% of max(1, |log|L||).
LConstancyReport verify_L_constancy(double A, double d, std::size_t M, std::span<const double> z_samples);

double l_constancy_bound(double A, double d);

}  // namespace natmodes
