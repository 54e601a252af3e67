#include "natmodes/modefinder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <limits>
#include <optional>
#include <tuple>

namespace natmodes {

const char* to_string(ModeMethod method) noexcept {
  switch (method) {
    case ModeMethod::ExactPolynomial: return "exact-polynomial";
    case ModeMethod::ContourNewton: return "contour-newton";
    case ModeMethod::Asymptotic: return "asymptotic";
    case ModeMethod::NearResonance: return "near-resonance";
  }
  return "unknown";
}

void SearchRegion::validate() const {
  if (!(rect.re_min < rect.re_max) || !(rect.im_min < rect.im_max)) {
    throw Error(ErrorKind::InvalidArgument, "search region needs re_min < re_max and im_min < im_max");
  }
  if (max_depth < 1) throw Error(ErrorKind::InvalidArgument, "max_depth must be at least 1");
  if (!(newton_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "newton_tol must be positive");
  if (exclusion_radius && !(*exclusion_radius > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "exclusion_radius must be positive");
  }
}

int ModeSet::total_multiplicity() const noexcept {
  int total = 0;
  for (const auto& m : modes) total += m.multiplicity;
  return total;
}

std::uint64_t fnv1a(const std::string& text, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fingerprint(const Stack& stack) {
  std::string text;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    text += buf;
  };
  text += stack.ambient_in.describe() + "|";
  for (const auto& layer : stack.layers) {
    text += layer.material.describe() + "@";
    num(layer.thickness);
  }
  text += "|" + stack.ambient_out.describe() + "|";
  text += stack.polarization == Polarization::TE ? "TE;" : "TM;";
  num(stack.theta0);
  num(stack.c);
  return fnv1a(text);
}

std::vector<ExclusionDisk> exclusion_disks(const Stack& stack, std::optional<double> radius) {
  std::vector<ExclusionDisk> disks;
  for (const auto& layer : stack.layers) {
    if (!layer.material.is_dispersive()) continue;
    const double r = radius.value_or(std::max(1e-3 * layer.material.as_lorentz().gamma, 1e-8));
    for (const cplx& p : pole_frequencies(layer.material)) disks.push_back({p, r});
  }
  return disks;
}

void sort_modes(std::vector<Mode>& modes) {
  std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
    return std::make_tuple(a.omega.real(), a.omega.imag(), static_cast<int>(a.method)) <
           std::make_tuple(b.omega.real(), b.omega.imag(), static_cast<int>(b.method));
  });
}

namespace {

constexpr int kMaxJitter = 5;
constexpr double kResidualTol = 1e-9;

struct Cell {
  Rect rect;
  int depth = 0;
  int count = -1;  // -1: not counted (touches an exclusion disk)
};

double distance_to_rect(cplx p, const Rect& r) {
  const double dx = std::max({r.re_min - p.real(), 0.0, p.real() - r.re_max});
  const double dy = std::max({r.im_min - p.imag(), 0.0, p.imag() - r.im_max});
  return std::hypot(dx, dy);
}

class Finder {
 public:
  Finder(const Stack& stack, const SearchRegion& region, std::uint64_t seed)
      : stack_(stack), region_(region), rng_(seed), disks_(exclusion_disks(stack, region.exclusion_radius)) {}

  ModeSet run() {
    out_.stack_fingerprint = fingerprint(stack_);
    Cell root{region_.rect, 0, -1};
    if (!touching(root.rect)) {
      root.count = count_root(root.rect);
      out_.winding_total += root.count;
    }
    std::vector<Cell> work{root};
    while (!work.empty()) {
      Cell cell = work.back();
      work.pop_back();
      process(cell, work);
    }
    dedup();
    return std::move(out_);
  }

 private:
  const ExclusionDisk* touching(const Rect& r) const {
    for (const auto& d : disks_) {
      if (distance_to_rect(d.center, r) <= d.radius) return &d;
    }
    return nullptr;
  }

  // The root contour may be nudged outward when it passes through a zero.
  int count_root(Rect& r) {
    std::uniform_real_distribution<double> u(0.0, 1e-7);
    for (int attempt = 0;; ++attempt) {
      try {
        return count_zeros(stack_, r);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ContourThroughZero || attempt >= kMaxJitter) throw;
      }
      const double w = r.width(), h = r.height();
      r.re_min -= u(rng_) * w, r.re_max += u(rng_) * w;
      r.im_min -= u(rng_) * h, r.im_max += u(rng_) * h;
    }
  }

  void process(const Cell& cell, std::vector<Cell>& work) {
    ++out_.cells_visited;
    const Rect& r = cell.rect;
    if (cell.count < 0) {
      const ExclusionDisk* d = touching(r);
      if (d && std::max(r.width(), r.height()) <= d->radius) {
        ++out_.cells_excluded;
        return;
      }
      if (cell.depth >= region_.max_depth) {
        // Larger than a disk yet out of depth: its zeros were never counted.
        out_.unresolved.push_back({r, -1});
        return;
      }
      split(cell, work);
      return;
    }
    if (cell.count == 0) return;
    if (cell.count == 1) {
      if (auto root = newton(r)) {
        out_.modes.push_back({*root, 1, ModeMethod::ContourNewton, mode_residual(stack_, *root)});
        return;
      }
    }
    if (cell.depth < region_.max_depth) {
      split(cell, work);
      return;
    }
    // Only a cell shrunk to Newton scale is taken as one multiple root.
    if (cell.count > 1 && std::max(r.width(), r.height()) <= 1e3 * region_.newton_tol * std::max(1.0, std::abs(r.center()))) {
      if (auto root = newton(r)) {
        out_.modes.push_back({*root, cell.count, ModeMethod::ContourNewton, mode_residual(stack_, *root)});
        return;
      }
    }
    out_.unresolved.push_back({r, cell.count});
  }

  // Quadrisection. The split point moves off-centre when a child contour
  // meets a zero or the children's counts disagree with the parent.
  void split(const Cell& parent, std::vector<Cell>& work) {
    const Rect& r = parent.rect;
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (int attempt = 0;; ++attempt) {
      const double fx = attempt == 0 ? 0.5 : 0.5 + u(rng_);
      const double fy = attempt == 0 ? 0.5 : 0.5 + u(rng_);
      const double xm = r.re_min + fx * r.width();
      const double ym = r.im_min + fy * r.height();
      std::array<Cell, 4> kids{Cell{{r.re_min, xm, r.im_min, ym}, parent.depth + 1},
                               Cell{{xm, r.re_max, r.im_min, ym}, parent.depth + 1},
                               Cell{{r.re_min, xm, ym, r.im_max}, parent.depth + 1},
                               Cell{{xm, r.re_max, ym, r.im_max}, parent.depth + 1}};
      bool ok = true;
      int sum = 0;
      try {
        for (auto& k : kids) {
          if (!touching(k.rect)) {
            k.count = count_zeros(stack_, k.rect);
            sum += k.count;
          }
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ContourThroughZero) throw;
        ok = false;
      }
      if (ok && parent.count >= 0 && sum != parent.count) ok = false;
      if (ok) {
        if (parent.count < 0) out_.winding_total += sum;
        // Reverse push so children are processed in a fixed order.
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) work.push_back(*it);
        return;
      }
      if (attempt >= kMaxJitter) {
        throw Error(ErrorKind::ContourThroughZero, "cell contour still meets a zero after jittering");
      }
    }
  }

  std::optional<cplx> newton(const Rect& r) const {
    const double side = std::max(r.width(), r.height());
    const Rect box{r.re_min - 0.25 * side, r.re_max + 0.25 * side, r.im_min - 0.25 * side, r.im_max + 0.25 * side};
    cplx w = r.center();
    bool converged = false;
    double last_step = side;
    double slope = 0.0;
    try {
      for (int it = 0; it < 60; ++it) {
        const double scale = std::max(1.0, std::abs(w));
        // Near a Lorentz pole q varies on scales far below 1e-6, so the
        // difference step also follows the Newton step down to 1e-13.
        double h = std::max(std::min({1e-6 * scale, 1e-3 * side, 0.1 * last_step}), 1e-13 * scale);
        volatile double shifted = w.real() + h;
        h = shifted - w.real();
        const cplx q0 = inverse_reflection(stack_, w);
        const cplx dq = (inverse_reflection(stack_, w + h) - inverse_reflection(stack_, w - h)) / (2.0 * h);
        if (!std::isfinite(std::abs(dq)) || dq == 0.0) return std::nullopt;
        slope = std::abs(dq);
        cplx step = q0 / dq;
        if (!std::isfinite(std::abs(step))) return std::nullopt;
        if (std::abs(step) > 0.5 * side) step *= 0.5 * side / std::abs(step);
        w -= step;
        last_step = std::abs(step);
        if (!box.contains(w)) return std::nullopt;
        if (converged) break;
        if (std::abs(step) <= region_.newton_tol * scale) converged = true;  // one more polishing step
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::PoleEvaluation) return std::nullopt;
      throw;
    }
    if (!converged) return std::nullopt;
    const double margin = 1e-9 * side;
    const Rect inside{r.re_min - margin, r.re_max + margin, r.im_min - margin, r.im_max + margin};
    if (!inside.contains(w)) return std::nullopt;
    // Close to a pole q' exceeds 1e9 and an omega error of a few ulps
    // leaves a residual above 1e-9; accept down to that rounding floor.
    const double floor = 256.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(w)) * slope;
    if (!(mode_residual(stack_, w) < std::max(kResidualTol, floor))) return std::nullopt;
    return w;
  }

  void dedup() {
    sort_modes(out_.modes);
    const double radius = 10.0 * region_.newton_tol;
    std::vector<Mode> kept;
    for (const auto& m : out_.modes) {
      bool dup = false;
      for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
        if (m.omega.real() - it->omega.real() > radius) break;
        if (std::abs(m.omega - it->omega) <= radius) {
          it->multiplicity = std::max(it->multiplicity, m.multiplicity);
          dup = true;
          break;
        }
      }
      if (!dup) kept.push_back(m);
    }
    out_.modes = std::move(kept);
  }

  const Stack& stack_;
  const SearchRegion& region_;
  std::mt19937_64 rng_;
  std::vector<ExclusionDisk> disks_;
  ModeSet out_;
};

}  // namespace

ModeSet find_modes(const Stack& stack, const SearchRegion& region, std::uint64_t seed) {
  stack.validate();
  region.validate();
  if (stack.ambient_in.is_dispersive() || stack.ambient_out.is_dispersive()) {
    throw Error(ErrorKind::Unsupported, "find_modes: dispersive ambient media put a branch cut in the search region");
  }
  ModeSet result = Finder(stack, region, seed).run();
  if (!result.unresolved.empty()) throw MaxDepthExceeded(std::move(result));
  return result;
}

}  // namespace natmodes
