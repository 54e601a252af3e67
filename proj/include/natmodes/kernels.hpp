#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference
// and, on x86-64, an AVX2+FMA variant picked at runtime. Both variants run
// the same arithmetic (power-of-two renormalisation, identical operation
// order per point), so they agree to a few ulps; tests/test_kernels.cpp
// checks that.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace natmodes::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;

/// ISA used by the dispatching entry points. Defaults to the best available
/// one; NATMODES_ISA=scalar in the environment forces the reference path.
Isa active_isa() noexcept;
void set_active_isa(Isa isa);

// ---------------------------------------------------------------------------
// Interface recursion over a batch of frequencies (structure of arrays).
//
// Media are indexed m = 0..media-1 and layers l = 0..media-3; element (k, p)
// lives at k * points + p. The phase factors are pre-normalised:
//   ep = exp(i delta - |Im delta|),  em = exp(-i delta - |Im delta|),
// decay = exp(-|Im delta|) is applied to the transmission numerator, and
// shift_total[p] is the sum of the removed |Im delta| over all layers.
struct RecursionBatch {
  std::size_t points = 0;
  std::size_t media = 0;
  std::vector<double> g_re, g_im;    // media * points
  std::vector<double> ep_re, ep_im;  // layers * points
  std::vector<double> em_re, em_im;  // layers * points
  std::vector<double> decay;         // layers * points
  std::vector<double> shift_total;   // points

  void resize(std::size_t n_points, std::size_t n_media);
};

struct RecursionOutput {
  std::vector<double> Z_re, Z_im, N_re, N_im, T_re, T_im;
  std::vector<double> log_scale;

  void resize(std::size_t n_points);
};

void wolter_batch_scalar(const RecursionBatch& in, RecursionOutput& out);
void wolter_batch_avx2(const RecursionBatch& in, RecursionOutput& out);
void wolter_batch(const RecursionBatch& in, RecursionOutput& out);

// ---------------------------------------------------------------------------
// Product of (1 - z * mu_j) over a list of reciprocal eigenvalues mu_j = 1/lambda_j.
// The result is mantissa * 2^exponent with |mantissa| in [1, 2) (or 0).
struct ScaledComplex {
  std::complex<double> mantissa{1.0, 0.0};
  double exponent = 0.0;

  double log_abs() const;
  std::complex<double> value() const;
};

void product_scalar(std::span<const double> mu_re, std::span<const double> mu_im, std::span<const std::complex<double>> z,
                    std::span<ScaledComplex> out);
void product_avx2(std::span<const double> mu_re, std::span<const double> mu_im, std::span<const std::complex<double>> z,
                  std::span<ScaledComplex> out);
void product(std::span<const double> mu_re, std::span<const double> mu_im, std::span<const std::complex<double>> z,
             std::span<ScaledComplex> out);

}  // namespace natmodes::kernels
