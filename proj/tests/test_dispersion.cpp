#include <doctest.h>

#include <cmath>
#include <random>

#include "natmodes/dispersion.hpp"
#include "natmodes/error.hpp"

using namespace natmodes;

namespace {
const Material kNarrowLorentz = Material::lorentz(0.25, 1.0, 1e-3);
}

TEST_SUITE("dispersion") {
  TEST_CASE("static limit and constant index") {
    CHECK(std::abs(eval_n(kNarrowLorentz, 0.0) - std::sqrt(1.25)) < 1e-12);
    CHECK(eval_n(Material::constant(1.5), cplx(3.0, -2.0)) == cplx(1.5, 0.0));
  }

  TEST_CASE("high frequency expansion") {
    const cplx n = eval_n(kNarrowLorentz, 1e3);
    const double expect = 1.0 - 0.25 / 2e6;
    CHECK(std::abs(n.real() - expect) / expect < 1e-8);
    // A recovered from 1 - n ~ A/(2 w^2) at two frequencies.
    for (double w : {1e3, 1e4}) {
      const double A = 2.0 * w * w * (1.0 - eval_n(kNarrowLorentz, w).real());
      CHECK(std::abs(A - high_freq_coefficient(kNarrowLorentz)) < 1e-4);
    }
    CHECK(high_freq_coefficient(Material::lorentz(1.0, 1.0, 0.0)) == 1.0);
    CHECK_THROWS_AS(high_freq_coefficient(Material::constant(1.5)), Error);
  }

  TEST_CASE("poles") {
    const auto p = pole_frequencies(kNarrowLorentz);
    CHECK(std::abs(p[0] - cplx(std::sqrt(1.0 - 0.25e-6), -0.0005)) < 1e-15);
    CHECK(std::abs(p[1] - cplx(-std::sqrt(1.0 - 0.25e-6), -0.0005)) < 1e-15);
    for (cplx w : p) {
      CHECK(std::abs(1.0 - w * w - cplx(0, 1e-3) * w) < 1e-12);
      CHECK(w.imag() <= 0.0);
    }
    const auto undamped = pole_frequencies(Material::lorentz(0.3, 2.0, 0.0));
    CHECK(undamped[0] == cplx(2.0, 0.0));
    CHECK(undamped[1] == cplx(-2.0, 0.0));
    const auto critical = pole_frequencies(Material::lorentz(0.3, 1.0, 2.0));
    CHECK(std::abs(critical[0] - cplx(0, -1)) < 1e-15);
    CHECK(std::abs(critical[1] - cplx(0, -1)) < 1e-15);
    CHECK_THROWS_AS(pole_frequencies(Material::constant(2.0)), Error);
  }

  TEST_CASE("branch points are zeros of n^2") {
    for (cplx b : branch_points(kNarrowLorentz)) CHECK(std::abs(eval_n2(kNarrowLorentz, b)) < 1e-10);
  }

  TEST_CASE("evaluation at a pole") {
    CHECK_THROWS_AS(eval_n(Material::lorentz(0.25, 1.0, 0.0), 1.0), Error);
  }

  TEST_CASE("conjugation symmetry and limit") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
      const cplx w(u(rng), u(rng));
      CHECK(std::abs(eval_n(kNarrowLorentz, -std::conj(w)) - std::conj(eval_n(kNarrowLorentz, w))) < 1e-12);
    }
    for (double arg : {0.1, 1.0, 2.0, -0.7}) {
      const cplx w = std::polar(1e4, arg);
      CHECK(std::abs(eval_n(Material::lorentz(1.0, 1.0, 0.1), w) - 1.0) < 1e-6);
    }
  }

  TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(Material::lorentz(0.0, 1.0, 0.0), Error);
    CHECK_THROWS_AS(Material::lorentz(0.1, -1.0, 0.0), Error);
    CHECK_THROWS_AS(Material::lorentz(0.1, 1.0, -1.0), Error);
    CHECK_THROWS_AS(Material::constant(0.0), Error);
  }
}
