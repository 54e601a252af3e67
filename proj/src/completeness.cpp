#include "natmodes/completeness.hpp"

#include <algorithm>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <numbers>

#include "natmodes/analysis.hpp"
#include "natmodes/kernels.hpp"

namespace natmodes {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMinFactors = 100;
constexpr double kHitTol = 1e-12;

bool by_re(const cplx& a, const cplx& b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

void check_ratio(const std::vector<cplx>& side) {
  for (std::size_t k = side.size() / 2; k < side.size(); ++k) {
    const double ratio = std::abs(side[k]) / (kPi * static_cast<double>(k + 1));
    if (ratio < 0.5 || ratio > 2.0) {
      throw Error(ErrorKind::RatioConditionViolated,
                  "|lambda_k|/(pi k) = " + std::to_string(ratio) + " at k = " + std::to_string(k + 1));
    }
  }
}

}  // namespace

const char* to_string(ZMap map) noexcept {
  switch (map) {
    case ZMap::Identity: return "identity";
    case ZMap::NearResonance: return "near-resonance";
    case ZMap::LargeFrequency: return "large-frequency";
  }
  return "unknown";
}

const char* to_string(TailModel tail) noexcept {
  return tail == TailModel::None ? "none" : "asymptotic-pairing";
}

const char* to_string(Completeness c) noexcept {
  switch (c) {
    case Completeness::Complete: return "complete";
    case Completeness::Incomplete: return "incomplete";
    case Completeness::Undetermined: return "undetermined";
  }
  return "unknown";
}

PreparedProduct::PreparedProduct(const CanonicalProduct& cp) {
  if (cp.lambdas.size() < kMinFactors) {
    throw Error(ErrorKind::InvalidArgument, "canonical product needs at least 100 factors");
  }
  std::vector<cplx> pos, neg;
  for (const cplx& l : cp.lambdas) {
    if (l == 0.0 || !std::isfinite(l.real()) || !std::isfinite(l.imag())) {
      throw Error(ErrorKind::InvalidArgument, "eigenvalues must be finite and nonzero");
    }
    (l.real() >= 0.0 ? pos : neg).push_back(l);
  }
  std::sort(pos.begin(), pos.end(), by_re);
  std::sort(neg.begin(), neg.end(), [](const cplx& a, const cplx& b) { return by_re(-a, -b); });

  tail_ = cp.tail_model == TailModel::AsymptoticPairing;
  if (cp.pair || tail_) {
    pairs_ = std::min(pos.size(), neg.size());
    pos.resize(pairs_);
    neg.resize(pairs_);
    for (std::size_t k = 0; k < pairs_; ++k) {
      lambdas_.push_back(pos[k]);
      lambdas_.push_back(neg[k]);
    }
  } else {
    lambdas_ = pos;
    lambdas_.insert(lambdas_.end(), neg.begin(), neg.end());
  }
  check_ratio(pos);
  check_ratio(neg);
  outer_ratio_ = pos.empty() ? 0.0 : std::abs(pos.back()) / (kPi * static_cast<double>(pos.size()));
  for (const cplx& l : pos) positive_re_.push_back(l.real());

  if (tail_) {
    if (pairs_ < 4) throw Error(ErrorKind::InvalidArgument, "tail model needs paired factors");
    // Half-widths s_k = (Re l+ - Re l-)/2 on the upper half, fitted to a k + b.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const std::size_t k0 = pairs_ / 2;
    const double n = static_cast<double>(pairs_ - k0);
    for (std::size_t k = k0; k < pairs_; ++k) {
      const double x = static_cast<double>(k + 1);
      const double y = 0.5 * (pos[k].real() - neg[k].real());
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    slope_ = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    offset_ = (sy - slope_ * sx) / n;
    centre_ = 0.5 * (pos.back() + neg.back());
  }

  mu_re_.reserve(lambdas_.size());
  mu_im_.reserve(lambdas_.size());
  for (const cplx& l : lambdas_) {
    const cplx mu = 1.0 / l;
    mu_re_.push_back(mu.real());
    mu_im_.push_back(mu.imag());
  }
}

void PreparedProduct::check_hit(cplx z, bool allow_exact) const {
  for (const cplx& l : lambdas_) {
    if (z == l && allow_exact) continue;
    if (std::abs(z - l) <= kHitTol * std::max(1.0, std::abs(l))) {
      throw Error(ErrorKind::EigenvalueHit, "evaluation point coincides with an eigenvalue");
    }
  }
}

cplx PreparedProduct::tail_log(cplx z) const {
  if (!tail_) return 0.0;
  const double x = static_cast<double>(pairs_) + 1.0 + offset_ / slope_;
  return (2.0 * centre_ * z - z * z) * boost::math::trigamma(x) / (slope_ * slope_);
}

double PreparedProduct::tail_remainder(cplx z) const {
  if (!tail_) return 0.0;
  const double x = static_cast<double>(pairs_) + offset_ / slope_;
  const double r = std::abs(z) + std::abs(centre_);
  return std::pow(r / slope_, 4) / (6.0 * x * x * x);
}

std::vector<cplx> PreparedProduct::evaluate(std::span<const cplx> z) const {
  for (const cplx& p : z) check_hit(p, true);
  std::vector<kernels::ScaledComplex> raw(z.size());
  kernels::product(mu_re_, mu_im_, z, raw);
  std::vector<cplx> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::find(lambdas_.begin(), lambdas_.end(), z[i]) != lambdas_.end()) {
      out[i] = 0.0;
      continue;
    }
    out[i] = raw[i].value() * std::exp(tail_log(z[i]));
  }
  return out;
}

cplx PreparedProduct::operator()(cplx z) const { return evaluate(std::span<const cplx>(&z, 1))[0]; }

std::vector<double> PreparedProduct::log_abs(std::span<const cplx> z) const {
  for (const cplx& p : z) check_hit(p, false);
  std::vector<kernels::ScaledComplex> raw(z.size());
  kernels::product(mu_re_, mu_im_, z, raw);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = raw[i].log_abs() + tail_log(z[i]).real();
  return out;
}

cplx eval_canonical_product(const CanonicalProduct& cp, cplx z) { return PreparedProduct(cp)(z); }

CompletenessReport classify(const CanonicalProduct& cp, const ClassifyOptions& options) {
  if (!(options.x_min > 0.0) || !(options.x_max >= 100.0 * options.x_min)) {
    throw Error(ErrorKind::InvalidArgument, "classification grid must span at least two decades");
  }
  if (options.per_decade < 1) throw Error(ErrorKind::InvalidArgument, "per_decade must be positive");
  const PreparedProduct F(cp);

  // Envelope sample points: midpoints between consecutive positive real parts.
  std::vector<double> mids;
  double prev = 0.0;
  for (double r : F.positive_re()) {
    if (r > prev) mids.push_back(0.5 * (prev + r));
    prev = r;
  }
  if (mids.empty() || mids.back() < options.x_max) {
    throw Error(ErrorKind::TruncationTooSmall, "eigenvalues do not reach the end of the classification grid");
  }
  const double decades = std::log10(options.x_max / options.x_min);
  const int n = static_cast<int>(std::lround(decades * options.per_decade));
  std::vector<cplx> xs;
  for (int i = 0; i <= n; ++i) {
    const double x = options.x_min * std::pow(10.0, decades * i / n);
    const auto it = std::lower_bound(mids.begin(), mids.end(), x);
    double snap = it == mids.end() ? mids.back() : *it;
    if (it != mids.begin() && (it == mids.end() || x - *(it - 1) < *it - x)) snap = *(it - 1);
    if (snap < options.x_max / 10.0 || snap > options.x_max) continue;
    if (xs.empty() || xs.back().real() != snap) xs.push_back({snap, 0.0});
  }
  if (xs.size() < 3) throw Error(ErrorKind::FitUnstable, "fewer than three envelope samples in the fit decade");

  const std::vector<double> logf = F.log_abs(xs);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i].real());
    sx += lx, sy += logf[i], sxx += lx * lx, sxy += lx * logf[i];
  }
  const double p = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double c0 = (sy - p * sx) / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = logf[i] - (p * std::log(xs[i].real()) + c0);
    ss += r * r;
  }

  CompletenessReport rep;
  rep.decay_exponent = p;
  rep.fit_lo = xs.front().real();
  rep.fit_hi = xs.back().real();
  rep.fit_residual = std::sqrt(ss / m);
  rep.truncation = F.factors();
  rep.tail_model = cp.tail_model;
  rep.z_map = cp.z_map;
  rep.paley_wiener_ratio_check = std::abs(F.outer_ratio() - 1.0) <= 1e-2;
  if (rep.fit_residual > options.max_fit_residual) {
    throw Error(ErrorKind::FitUnstable, "log-log fit residual " + std::to_string(rep.fit_residual));
  }
  if (p >= -0.5 + options.margin) {
    rep.classification = Completeness::Complete;
  } else if (p <= -0.5 - options.margin) {
    rep.classification = Completeness::Incomplete;
    // Each extra zero raises the exponent by one.
    const int extra = static_cast<int>(std::ceil(-0.5 + options.margin - p));
    rep.note = "finite adjunction: " + std::to_string(extra) + " added factor(s) lift the exponent past -1/2";
  } else {
    rep.classification = Completeness::Undetermined;
  }
  return rep;
}

CanonicalProduct synthetic_product(SyntheticSet set, std::size_t pairs, TailModel tail) {
  CanonicalProduct cp;
  cp.tail_model = tail;
  cp.z_map = ZMap::Identity;
  const double shift = set == SyntheticSet::Sine ? 0.0 : 0.5;
  for (std::size_t m = 1; m <= pairs; ++m) {
    const double v = (static_cast<double>(m) - shift) * kPi;
    if (!(set == SyntheticSet::CosineMinusOne && m == 1)) cp.lambdas.push_back(v);
    cp.lambdas.push_back(-v);
  }
  return cp;
}

cplx map_to_z(const ZMapParams& params, cplx omega) {
  switch (params.map) {
    case ZMap::Identity: return omega;
    case ZMap::LargeFrequency: return omega * params.d / params.c;
    case ZMap::NearResonance: return eval_n(params.material, omega) * omega * params.d / params.c;
  }
  return omega;
}

CanonicalProduct canonical_product_from_modes(const std::vector<Mode>& modes, const ZMapParams& params,
                                              std::size_t pairs, std::string* tail_source) {
  CanonicalProduct cp;
  cp.z_map = params.map;
  // Mode sets are symmetric under omega -> -conj(omega); the right half-plane
  // modes are used and mirrored so one-sided search regions work too.
  // Family index of each found eigenvalue: both families sit at Re lambda ~ m pi.
  std::vector<bool> covered(pairs + 1, false);
  for (const auto& m : modes) {
    if (m.omega.real() < 0.0) continue;
    for (int k = 0; k < m.multiplicity; ++k) {
      const cplx l = map_to_z(params, m.omega);
      cp.lambdas.push_back(l);
      if (m.omega.real() > 0.0) cp.lambdas.push_back(map_to_z(params, -std::conj(m.omega)));
      const double idx = std::round(l.real() / kPi);
      if (idx >= 1.0 && idx <= static_cast<double>(pairs)) covered[static_cast<std::size_t>(idx)] = true;
    }
  }
  std::vector<int> missing;
  for (std::size_t m = 1; m <= pairs; ++m) {
    if (!covered[m]) missing.push_back(static_cast<int>(m));
  }
  std::string source = "none";
  if (!missing.empty() && params.map != ZMap::Identity) {
    const std::string range = std::to_string(missing.size()) + " of m=1.." + std::to_string(pairs);
    if (params.map == ZMap::LargeFrequency) {
      std::vector<int> ms;
      for (int m : missing) ms.push_back(m), ms.push_back(-m);
      const double A = high_freq_coefficient(params.material);
      for (const auto& f : asymptotic_modes(A, params.d, ms, params.c)) {
        cp.lambdas.push_back(map_to_z(params, std::conj(f.omega)));
      }
      source = "asymptotic " + range;
    } else {
      for (int m : missing) {
        const auto f = near_resonance_modes_slab(params.material, params.d, m, m, params.c).front();
        cp.lambdas.push_back(map_to_z(params, f.omega_approx));
        cp.lambdas.push_back(map_to_z(params, -std::conj(f.omega_approx)));
      }
      source = "near-resonance " + range;
    }
  }
  if (tail_source) *tail_source = source;
  return cp;
}

double l_constancy_bound(double A, double d) {
  return 16.0 / kPi * lambert_w(0.5 * std::sqrt(A) * d).real() + 8.0 * kPi * kPi * kPi / (A * d * d);
}

LConstancyReport verify_L_constancy(double A, double d, std::size_t M, std::span<const double> z_samples) {
  if (!(A > 0.0) || !(d > 0.0)) throw Error(ErrorKind::InvalidArgument, "A and d must be positive");
  CanonicalProduct cp;
  cp.z_map = ZMap::LargeFrequency;
  cp.tail_model = TailModel::AsymptoticPairing;
  for (std::size_t m = 1; m <= M; ++m) {
    const double mp = static_cast<double>(m) * kPi;
    const double lg = std::log(4.0 * mp * mp / (A * d * d));
    cp.lambdas.push_back({mp, lg});
    cp.lambdas.push_back({-mp, lg});
  }
  const PreparedProduct L(cp);
  std::vector<cplx> zs(z_samples.begin(), z_samples.end());
  const std::vector<double> logs = L.log_abs(zs);

  LConstancyReport rep;
  rep.truncation = L.factors();
  rep.bound = l_constancy_bound(A, d);
  rep.within_bound = true;
  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const double v = std::exp(logs[i]);
    rep.rows.push_back({std::abs(zs[i]), v});
    lo = std::min(lo, v), hi = std::max(hi, v), sum += v;
    if (std::abs(logs[i]) > rep.bound) rep.within_bound = false;
    const double rem = L.tail_remainder(zs[i]);
    rep.max_tail_remainder = std::max(rep.max_tail_remainder, rem);
    if (rem > 0.01 * std::max(1.0, std::abs(logs[i]))) {
      throw Error(ErrorKind::TruncationTooSmall, "tail remainder exceeds 1% of log|L| at |z| = " +
                                                     std::to_string(std::abs(zs[i])));
    }
  }
  if (!zs.empty()) rep.relative_variation = (hi - lo) / (sum / static_cast<double>(zs.size()));
  return rep;
}

}  // namespace natmodes
