#include <doctest.h>

#include <cmath>
#include <random>

#include "natmodes/modefinder.hpp"

using namespace natmodes;

namespace {

Stack slab(Material m, double d) {
  Stack s;
  s.layers.push_back({m, d});
  return s;
}

const double kLn5 = std::log(5.0);

// Slab n = 1.5 in vacuum: delta_k = k pi - i ln 5, omega = delta / 1.5.
cplx slab_root(int k) { return cplx(k * M_PI, -kLn5) / 1.5; }

}  // namespace

TEST_SUITE("modefinder") {
  TEST_CASE("slab closed form") {
    const Stack s = slab(Material::constant(1.5), 1.0);
    SearchRegion r;
    r.rect = {0.5 * M_PI / 1.5, 5.5 * M_PI / 1.5, -3.0, 0.0};
    const ModeSet set = find_modes(s, r);
    REQUIRE(set.modes.size() == 5);
    CHECK(set.winding_total == 5);
    for (int k = 1; k <= 5; ++k) {
      CHECK(std::abs(set.modes[k - 1].omega - slab_root(k)) < 1e-9);
      CHECK(set.modes[k - 1].method == ModeMethod::ContourNewton);
    }
  }

  TEST_CASE("count_zeros") {
    const Stack s = slab(Material::constant(1.5), 1.0);
    CHECK(count_zeros(s, {0.1, 4.0, -2.0, 0.5}) == 1);  // k = 1 at 2.09 - 1.07i
    CHECK(count_zeros(s, {0.1, 7.0, -2.0, 0.5}) == 3);
    CHECK(count_zeros(s, {0.1, 1.0, -0.5, 0.5}) == 0);
    // An edge through a root.
    const cplx z = slab_root(1);
    CHECK_THROWS_AS(count_zeros(s, {z.real(), z.real() + 1.0, -2.0, 0.5}), Error);
  }

  TEST_CASE("TE and TM roots coincide") {
    Stack te = slab(Material::constant(2.0), 0.8);
    Stack tm = te;
    tm.polarization = Polarization::TM;
    SearchRegion r;
    r.rect = {-6.0, 6.5, -2.0, 0.3};
    const auto a = find_modes(te, r), b = find_modes(tm, r);
    REQUIRE(a.modes.size() == b.modes.size());
    for (std::size_t i = 0; i < a.modes.size(); ++i) CHECK(std::abs(a.modes[i].omega - b.modes[i].omega) < 1e-9);
  }

  TEST_CASE("mirror symmetry of a layered stack") {
    Stack s;
    s.layers = {{Material::constant(2.3), 0.4}, {Material::constant(1.4), 1.1}, {Material::constant(3.0), 0.25}};
    SearchRegion r;
    r.rect = {-8.0, 8.3, -3.0, 0.2};
    const auto set = find_modes(s, r);
    CHECK(set.modes.size() >= 6);
    for (const auto& m : set.modes) {
      bool found = false;
      for (const auto& o : set.modes) found = found || std::abs(o.omega + std::conj(m.omega)) < 1e-9;
      CHECK(found);
    }
  }

  TEST_CASE("argument principle agrees with the polished roots") {
    Stack s;
    s.layers = {{Material::constant(1.8), 0.7}, {Material::constant(1.2), 1.3}};
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> re(-10.0, 10.0), im(-3.0, 0.5), size(0.5, 4.0);
    for (int i = 0; i < 20; ++i) {
      const double x = re(rng), y = im(rng), w = size(rng), h = size(rng);
      SearchRegion r;
      r.rect = {x, x + w, y - h, y};
      int winding = 0;
      try {
        winding = count_zeros(s, r.rect);
      } catch (const Error&) {
        continue;
      }
      const auto set = find_modes(s, r, static_cast<std::uint64_t>(i));
      CHECK(set.total_multiplicity() == winding);
      for (const auto& m : set.modes) CHECK(r.rect.contains(m.omega));
    }
  }

  TEST_CASE("deterministic for a fixed seed") {
    const Stack s = slab(Material::lorentz(0.25, 1.0, 1e-2), 1.0);
    SearchRegion r;
    r.rect = {0.0, 1.2, -0.1, 0.0};
    const auto a = find_modes(s, r, 42), b = find_modes(s, r, 42);
    REQUIRE(a.modes.size() == b.modes.size());
    for (std::size_t i = 0; i < a.modes.size(); ++i) CHECK(a.modes[i].omega == b.modes[i].omega);
    CHECK(a.stack_fingerprint == fingerprint(s));
  }

  TEST_CASE("exclusion disks") {
    const Stack s = slab(Material::lorentz(0.25, 1.0, 1e-3), 1.0);
    const auto disks = exclusion_disks(s, std::nullopt);
    REQUIRE(disks.size() == 2);
    CHECK(disks[0].radius == doctest::Approx(1e-6));
    CHECK(std::abs(disks[0].center - cplx(std::sqrt(1 - 0.25e-6), -5e-4)) < 1e-15);
    CHECK(exclusion_disks(s, 1e-4)[1].radius == 1e-4);
    CHECK(exclusion_disks(slab(Material::constant(2.0), 1.0), std::nullopt).empty());
  }

  TEST_CASE("depth limit reports the partial set") {
    const Stack s = slab(Material::lorentz(0.25, 1.0, 1e-3), 1.0);
    SearchRegion r;
    r.rect = {0.0, 1.2, -0.1, 0.0};
    r.max_depth = 3;
    try {
      find_modes(s, r);
      FAIL("expected MaxDepthExceeded");
    } catch (const MaxDepthExceeded& e) {
      CHECK_FALSE(e.partial().unresolved.empty());
      int pending = 0;
      for (const auto& c : e.partial().unresolved) pending += std::max(c.count, 0);
      CHECK(pending + e.partial().total_multiplicity() == e.partial().winding_total);
    }
  }

  TEST_CASE("region validation and unsupported stacks") {
    const Stack s = slab(Material::constant(1.5), 1.0);
    SearchRegion r;
    r.rect = {1.0, 0.0, -1.0, 0.0};
    CHECK_THROWS_AS(find_modes(s, r), Error);
    Stack amb = s;
    amb.ambient_out = Material::lorentz(0.25, 1.0, 1e-3);
    r.rect = {0.0, 1.0, -1.0, 0.0};
    CHECK_THROWS_AS(find_modes(amb, r), Error);
  }

  TEST_CASE("residual and fingerprint helpers") {
    const Stack s = slab(Material::constant(1.5), 1.0);
    CHECK(mode_residual(s, slab_root(2)) < 1e-12);
    CHECK(mode_residual(s, cplx(1.0, -0.2)) > 1e-3);
    Stack t = s;
    t.layers[0].thickness = 1.0000001;
    CHECK(fingerprint(s) != fingerprint(t));
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  }
}
