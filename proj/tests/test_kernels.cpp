#include <doctest.h>

#include <cmath>
#include <random>

#include "natmodes/kernels.hpp"
#include "natmodes/transfer.hpp"
#include "transfer_batch.hpp"

using namespace natmodes;
using namespace natmodes::kernels;

namespace {

Stack random_stack(std::mt19937_64& rng, bool dispersive) {
  std::uniform_real_distribution<double> n(1.0, 3.0), d(0.1, 2.0);
  Stack s;
  const int layers = 1 + static_cast<int>(rng() % 6);
  for (int k = 0; k < layers; ++k) {
    const Material m = dispersive && k % 2 == 0 ? Material::lorentz(0.25, 1.0, 1e-2) : Material::constant(n(rng));
    s.layers.push_back({m, d(rng)});
  }
  return s;
}

std::vector<cplx> random_omegas(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> re(-40.0, 40.0), im(-30.0, 0.5);
  std::vector<cplx> w(count);
  for (auto& x : w) x = {re(rng), im(rng)};
  return w;
}

// Relative agreement of two scaled complex numbers.
double scaled_diff(cplx a, double la, cplx b, double lb) {
  const double shift = std::max(la, lb);
  const cplx x = a * std::exp(la - shift), y = b * std::exp(lb - shift);
  return std::abs(x - y) / std::max(std::abs(x), std::abs(y));
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar batch matches the single-point recursion") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const Stack s = random_stack(rng, trial % 2 == 1);
      const auto w = random_omegas(rng, 37);
      RecursionBatch batch;
      detail::fill_batch(s, w, batch);
      RecursionOutput out;
      wolter_batch_scalar(batch, out);
      for (std::size_t p = 0; p < w.size(); ++p) {
        const TransferResult a = detail::batch_result(out, p);
        const TransferResult b = wolter_recursion(s, w[p]);
        CHECK(scaled_diff(a.N, a.log_scale, b.N, b.log_scale) < 1e-12);
        CHECK(scaled_diff(a.Z, a.log_scale, b.Z, b.log_scale) < 1e-12);
      }
    }
  }

  TEST_CASE("AVX2 recursion agrees with the scalar reference") {
    if (!isa_available(Isa::Avx2)) {
      MESSAGE("AVX2 not available; skipped");
      return;
    }
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const Stack s = random_stack(rng, trial % 3 == 0);
      const std::size_t count = 1 + rng() % 67;  // exercises the scalar remainder lanes
      const auto w = random_omegas(rng, count);
      RecursionBatch batch;
      detail::fill_batch(s, w, batch);
      RecursionOutput a, b;
      wolter_batch_scalar(batch, a);
      wolter_batch_avx2(batch, b);
      for (std::size_t p = 0; p < count; ++p) {
        // The log of the removed scale may differ by an ulp or so.
        CHECK(std::abs(a.log_scale[p] - b.log_scale[p]) <= 1e-13 * std::max(1.0, std::abs(a.log_scale[p])));
        const cplx na(a.N_re[p], a.N_im[p]), nb(b.N_re[p], b.N_im[p]);
        const cplx za(a.Z_re[p], a.Z_im[p]), zb(b.Z_re[p], b.Z_im[p]);
        const cplx ta(a.T_re[p], a.T_im[p]), tb(b.T_re[p], b.T_im[p]);
        const double size = std::max({std::abs(na), std::abs(za), 1e-300});
        const double rescale = std::exp(b.log_scale[p] - a.log_scale[p]);
        CHECK(std::abs(na - nb * rescale) <= 1e-12 * size);
        CHECK(std::abs(za - zb * rescale) <= 1e-12 * size);
        CHECK(std::abs(ta - tb * rescale) <= 1e-12 * std::max(std::abs(ta), 1e-300));
      }
    }
  }

  TEST_CASE("AVX2 product agrees with the scalar reference") {
    if (!isa_available(Isa::Avx2)) {
      MESSAGE("AVX2 not available; skipped");
      return;
    }
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t factors = 1 + rng() % 3000;
      std::vector<double> mr(factors), mi(factors);
      for (std::size_t j = 0; j < factors; ++j) {
        const cplx lambda(static_cast<double>(j + 1) * M_PI * (j % 2 ? -1 : 1), 0.3 * u(rng));
        const cplx mu = 1.0 / lambda;
        mr[j] = mu.real(), mi[j] = mu.imag();
      }
      std::vector<cplx> z(1 + rng() % 29);
      for (auto& x : z) x = {500.0 * u(rng), 50.0 * u(rng)};
      std::vector<ScaledComplex> a(z.size()), b(z.size());
      product_scalar(mr, mi, z, a);
      product_avx2(mr, mi, z, b);
      for (std::size_t k = 0; k < z.size(); ++k) {
        CHECK(std::abs(a[k].log_abs() - b[k].log_abs()) < 1e-10);
        CHECK(scaled_diff(a[k].mantissa, a[k].exponent * M_LN2, b[k].mantissa, b[k].exponent * M_LN2) < 1e-10);
      }
    }
  }

  TEST_CASE("product of a short list is exact") {
    const std::vector<double> mr{0.5, -0.25}, mi{0.0, 0.0};
    const std::vector<cplx> z{cplx(1.0, 1.0)};
    std::vector<ScaledComplex> out(1);
    product_scalar(mr, mi, z, out);
    const cplx expect = (1.0 - z[0] * 0.5) * (1.0 + z[0] * 0.25);
    CHECK(std::abs(out[0].value() - expect) < 1e-15);
  }

  TEST_CASE("dispatch") {
    const Isa before = active_isa();
    set_active_isa(Isa::Scalar);
    CHECK(active_isa() == Isa::Scalar);
    set_active_isa(before);
    CHECK(std::string(isa_name(Isa::Avx2)) == "avx2");
  }
}
