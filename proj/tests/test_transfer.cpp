#include <doctest.h>

#include <cmath>
#include <random>

#include "natmodes/error.hpp"
#include "natmodes/transfer.hpp"

using namespace natmodes;

namespace {

Stack slab(Material m, double d) {
  Stack s;
  s.layers.push_back({m, d});
  return s;
}

}  // namespace

TEST_SUITE("transfer") {
  TEST_CASE("layer parameters") {
    Stack s = slab(Material::constant(1.5), 2.0);
    const auto p = layer_params(s, cplx(0.3, -0.1));
    CHECK(p.g.size() == 3);
    CHECK(p.g[1] == cplx(1.5));
    CHECK(std::abs(p.delta[0] - 1.5 * 2.0 * cplx(0.3, -0.1)) < 1e-15);
    s.polarization = Polarization::TM;
    CHECK(std::abs(layer_params(s, 1.0).g[1] - 1.0 / 1.5) < 1e-15);

    s.polarization = Polarization::TE;
    s.theta0 = M_PI / 6;
    const double cos1 = std::sqrt(1.0 - std::pow(std::sin(M_PI / 6) / 1.5, 2));
    CHECK(std::abs(layer_params(s, 1.0).g[1] - 1.5 * cos1) < 1e-12);
    CHECK(std::abs(cos1 - 0.94281) < 1e-5);
  }

  TEST_CASE("single interface") {
    LayerParams p;
    p.g = {1.0, 1.5};
    const auto r = wolter_recursion(p);
    const cplx scale = std::exp(r.log_scale);
    CHECK(std::abs(r.Z * scale - 0.5) < 1e-15);
    CHECK(std::abs(r.N * scale - 2.5) < 1e-15);
    CHECK(std::abs(r.reflection() - 0.2) < 1e-15);
    CHECK(std::abs(r.transmission() - 0.8) < 1e-15);
    const double R = std::norm(r.reflection());
    CHECK(std::abs(R + 1.5 * std::norm(r.transmission()) - 1.0) < 1e-14);
  }

  TEST_CASE("identical media reflect nothing") {
    Stack s = slab(Material::constant(1.0), 0.7);
    for (double w : {0.1, 1.3, 7.0}) CHECK(std::abs(reflection(s, w)) < 1e-15);
  }

  TEST_CASE("slab denominator closed form") {
    const Stack s = slab(Material::constant(1.5), 1.0);
    for (double w : {0.2, 1.0, 2.7}) {
      const double g0 = 1, g1 = 1.5, g2 = 1;
      const cplx d = 1.5 * w;
      const cplx expect = (g2 + g1) * (g1 + g0) * std::exp(cplx(0, -1) * d) + (g2 - g1) * (g1 - g0) * std::exp(cplx(0, 1) * d);
      const auto r = wolter_recursion(s, w);
      CHECK(std::abs(r.N * std::exp(r.log_scale) - expect) < 1e-14 * std::abs(expect) + 1e-14);
    }
  }

  TEST_CASE("linearity under common scaling of g") {
    LayerParams p;
    p.g = {1.0, 2.1, 1.3, 1.7};
    p.delta = {cplx(0.4, 0.1), cplx(1.1, -0.3)};
    LayerParams q = p;
    for (auto& g : q.g) g *= 3.7;
    CHECK(std::abs(wolter_recursion(p).reflection() - wolter_recursion(q).reflection()) < 1e-12);
  }

  TEST_CASE("energy balance and conjugation symmetry") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> n(1.0, 3.0), d(0.1, 2.0), w(0.05, 10.0);
    for (int i = 0; i < 200; ++i) {
      Stack s;
      s.ambient_in = Material::constant(n(rng));
      s.ambient_out = Material::constant(n(rng));
      for (int k = 0; k < 4; ++k) s.layers.push_back({Material::constant(n(rng)), d(rng)});
      const double om = w(rng);
      const auto p = layer_params(s, om);
      const auto r = wolter_recursion(p);
      CHECK(std::abs(std::norm(r.reflection()) + flux_ratio(p) * std::norm(r.transmission()) - 1.0) < 1e-12);
    }
    const Stack ls = slab(Material::lorentz(0.25, 1.0, 1e-3), 1.0);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
      const cplx om(u(rng), u(rng));
      CHECK(std::abs(reflection(ls, -std::conj(om)) - std::conj(reflection(ls, om))) < 1e-10 * (1 + std::abs(reflection(ls, om))));
    }
  }

  TEST_CASE("quarter-wave slab reflects most at delta = pi/2") {
    const Stack s = slab(Material::constant(1.5), 1.0 / 1.5);
    double best = 0, arg = 0;
    for (int i = 1; i < 1000; ++i) {
      const double delta = M_PI * i / 1000.0;
      const double R = std::norm(reflection(s, delta));
      if (R > best) best = R, arg = delta;
    }
    CHECK(std::abs(arg - M_PI / 2) < 2 * M_PI / 1000);
  }

  TEST_CASE("denominator zero") {
    const Stack s = slab(Material::constant(1.5), 1.0);
    const cplx root = cplx(M_PI, -std::log(5.0)) / 1.5;
    CHECK_THROWS_AS(reflection(s, root), Error);
  }

  TEST_CASE("spectrum") {
    Stack s;
    for (int k = 0; k < 8; ++k) s.layers.push_back({Material::constant(k % 2 ? 1.0 : 1.5), k % 2 ? 1.0 : 1.0 / 1.5});
    std::vector<double> grid;
    for (int i = 0; i <= 2000; ++i) grid.push_back(M_PI * i / 2000.0);
    const auto rows = spectrum(s, grid);
    REQUIRE(rows.size() == grid.size());
    for (const auto& r : rows) CHECK(std::abs(r.R + r.T - 1.0) < 1e-12);
    int peaks = 0;
    for (const auto& r : rows) {
      if (r.is_peak) {
        ++peaks;
        CHECK(r.fwhm.has_value());
      }
    }
    CHECK(peaks > 0);
    CHECK(spectrum(s, std::vector<double>{}).empty());
  }

  TEST_CASE("TE and TM share the slab zero set at normal incidence") {
    Stack te = slab(Material::constant(1.5), 1.0);
    Stack tm = te;
    tm.polarization = Polarization::TM;
    for (int k = 1; k <= 4; ++k) {
      const cplx root = cplx(k * M_PI, -std::log(5.0)) / 1.5;
      const auto a = wolter_recursion(te, root), b = wolter_recursion(tm, root);
      CHECK(std::abs(a.N) / std::abs(a.Z) < 1e-12);
      CHECK(std::abs(b.N) / std::abs(b.Z) < 1e-12);
    }
  }

  TEST_CASE("stack validation") {
    Stack s;
    CHECK_THROWS_AS(s.validate(), Error);
    s.layers.push_back({Material::constant(1.5), 0.0});
    CHECK_THROWS_AS(s.validate(), Error);
    s.layers[0].thickness = 1.0;
    s.layers[0].material = Material::lorentz(0.25, 1.0, 0.0);
    s.theta0 = 0.3;
    CHECK_THROWS_AS(s.validate(), Error);
  }
}
