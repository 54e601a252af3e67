#include <doctest.h>

#include <cmath>

#include "natmodes/analysis.hpp"

using namespace natmodes;

namespace {

const Material kLorentz = Material::lorentz(0.25, 1.0, 1e-3);

Stack slab(Material m, double d) {
  Stack s;
  s.layers.push_back({m, d});
  return s;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("near-resonance quadratic") {
    const auto fam = near_resonance_modes_slab(kLorentz, 1.0, 1, 30);
    REQUIRE(fam.size() == 30);
    for (const auto& f : fam) {
      // Terms of the quadratic grow like (m pi)^2.
      const double scale = std::max(1.0, f.m * f.m * M_PI * M_PI);
      CHECK(std::abs(near_resonance_equation(kLorentz, 1.0, f.m, f.omega_approx)) < 1e-13 * scale);
      CHECK(f.omega_approx.real() > 0.0);
      CHECK(f.omega_approx.imag() < 0.0);
      // The sine argument sits close to m pi.
      const cplx arg = eval_n(kLorentz, f.omega_approx) * f.omega_approx;
      CHECK(std::abs(arg.real() / M_PI - f.m) < 0.05);
    }
    // m = 1 from the quadratic by hand: w^2 (f + pi^2) + i pi^2 G w - pi^2 = 0.
    const cplx a = 0.25 + M_PI * M_PI, b = cplx(0, M_PI * M_PI * 1e-3), c = -M_PI * M_PI;
    const cplx w = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
    CHECK(std::abs(fam[0].omega_approx - w) < 1e-14);
    CHECK_THROWS_AS(near_resonance_modes_slab(Material::constant(1.5), 1.0, 1, 2), Error);
  }

  TEST_CASE("near-resonance roots approach exact modes") {
    const Stack s = slab(kLorentz, 1.0);
    const auto fam = near_resonance_modes_slab(kLorentz, 1.0, 10, 14);
    double last = 1.0;
    for (const auto& f : fam) {
      const double corr = newton_correction(s, f.omega_approx);
      CHECK(corr < 1e-5);
      CHECK(corr < last);
      last = corr;
    }
  }

  TEST_CASE("two-layer families") {
    Stack s;
    s.layers = {{Material::lorentz(0.25, 1.0, 1e-3), 1.0}, {Material::lorentz(0.25, 0.5, 1e-3), 1.0}};
    const auto second = two_layer_near_resonance(s, ResonantLayer::Second, 10, 12);
    for (const auto& f : second) CHECK(std::abs(f.omega_approx.real() - 0.5) < 0.01);
    const auto first = two_layer_near_resonance(s, ResonantLayer::First, 10, 12);
    for (const auto& f : first) {
      CHECK(std::abs(two_layer_first_equation(s, f.omega_approx)) < 1e-8);
      CHECK(std::abs(f.omega_approx.real() - 1.0) < 0.01);
    }
    // With a vacuum second layer the first family reduces to the slab.
    Stack v;
    v.layers = {{kLorentz, 1.0}, {Material::constant(1.0), 0.7}};
    const auto red = two_layer_near_resonance(v, ResonantLayer::First, 10, 10);
    const auto slab_fam = near_resonance_modes_slab(kLorentz, 1.0, 10, 10);
    CHECK(std::abs(red[0].omega_approx - slab_fam[0].omega_approx) / std::abs(slab_fam[0].omega_approx) < 1e-2);
  }

  TEST_CASE("asymptotic family formula") {
    const auto fam = asymptotic_modes(0.25, 1.0, {10, -10, 100});
    REQUIRE(fam.size() == 3);
    const cplx expect = 10 * M_PI - cplx(0, -1) * std::log(4.0 * 100 * M_PI * M_PI / 0.25);
    CHECK(std::abs(fam[0].omega - expect) < 1e-12);
    CHECK(fam[0].omega.imag() > 0.0);
    CHECK(fam[2].rarified_residual < fam[0].rarified_residual);
    CHECK(std::abs(rarified_equation(0.25, 1.0, fam[2].omega)) == doctest::Approx(fam[2].rarified_residual));
    CHECK_THROWS_AS(asymptotic_modes(0.25, 1.0, {0}), Error);
  }

  TEST_CASE("cluster census") {
    const cplx pole(1.0, -5e-4);
    std::vector<Mode> modes;
    for (double r : {0.001, 0.003, 0.015, 0.04, 0.08, 0.3}) modes.push_back({pole + r});
    const auto rows = cluster_census(modes, pole, {0.1, 0.05, 0.02, 0.01});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].count == 5);
    CHECK(rows[1].count == 4);
    CHECK(rows[2].count == 3);
    CHECK(rows[3].count == 2);
    CHECK(rows[3].density == doctest::Approx(2 / (M_PI * 1e-4)));
    CHECK(census_counts_monotone(rows));
    CHECK(census_density_increasing(rows));
    CHECK(cluster_census({}, pole, {0.1, 0.05})[0].count == 0);
    CHECK_THROWS_AS(cluster_census(modes, pole, {0.01, 0.1}), Error);
  }

  TEST_CASE("exponential expansion reproduces the recursion") {
    Stack s;
    s.layers = {{Material::constant(1.7), 0.6}, {Material::constant(2.4), 0.35}, {Material::constant(1.3), 1.0}};
    const auto sum = expand_denominator(s);
    CHECK(sum.tau.size() <= 8);
    for (std::size_t i = 1; i < sum.tau.size(); ++i) CHECK(sum.tau[i] > sum.tau[i - 1]);
    for (cplx w : {cplx(0.7, 0.0), cplx(3.1, -0.4), cplx(-2.0, 0.3)}) {
      const auto r = wolter_recursion(s, w);
      const cplx n = r.N * std::exp(r.log_scale);
      CHECK(std::abs(sum(w) - n) < 1e-12 * std::abs(n));
    }
    CHECK_THROWS_AS(expand_denominator(slab(kLorentz, 1.0)), Error);
  }

  TEST_CASE("Langer bounds for a slab") {
    const auto sum = expand_denominator(slab(Material::constant(1.5), 1.0));
    const auto b = langer_bounds(sum);
    CHECK(b.terms == 2);
    CHECK(b.spread == doctest::Approx(3.0));
    // Roots sit on Im omega = -ln 5 / 1.5, inside the strip.
    CHECK(b.im_lower <= -std::log(5.0) / 1.5 + 1e-12);
    CHECK(b.im_upper >= -std::log(5.0) / 1.5 - 1e-12);
    CHECK(b.count_lower(10.0) == doctest::Approx(30.0 / (2 * M_PI) - 2));
  }
}
