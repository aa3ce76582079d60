#include <doctest.h>

#include <cmath>
#include <random>

#include "fpcav/serialize.hpp"
#include "fpcav/units.hpp"

using namespace fpcav;
using doctest::Approx;

TEST_SUITE("domain-model") {

TEST_CASE("wavelength to optical frequency") {
  CHECK(wavelength_to_frequency(580.8e-9) == Approx(5.161715874655648e14).epsilon(1e-12));
  CHECK(wavelength_to_frequency(611e-9) == Approx(4.906586873977087e14).epsilon(1e-12));
  CHECK(wavelength_to_frequency(1.0) == Approx(constants::speed_of_light));
  CHECK_THROWS_AS((void)wavelength_to_frequency(0.0), DomainError);
  CHECK_THROWS_AS((void)wavelength_to_frequency(-1e-6), DomainError);
}

TEST_CASE("linewidth to coherence time") {
  CHECK(linewidth_to_coherence_time(3.3e6) == Approx(9.645754126781535e-08).epsilon(1e-12));
  CHECK(linewidth_to_coherence_time(116e3) == Approx(2.7440507429637125e-06).epsilon(1e-12));
  CHECK(linewidth_to_coherence_time(1.0) == Approx(1.0 / constants::pi));
  CHECK_THROWS_AS((void)linewidth_to_coherence_time(0.0), DomainError);
}

TEST_CASE("angular conversion round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exponent(-3.0, 15.0);
  for (int i = 0; i < 1000; ++i) {
    const double hz = std::pow(10.0, exponent(rng));
    const double back = to_ordinary(to_angular(hz));
    CHECK(std::abs(back - hz) <= 4.0 * std::numeric_limits<double>::epsilon() * hz);
  }
  CHECK(to_angular(1.0) == Approx(2.0 * constants::pi));
}

TEST_CASE("transition invariants") {
  const Transition t(580.8e-9, 0.007, 3.3e6, 2e-3);
  CHECK(t.branching_ratio() == 0.007);
  CHECK_NOTHROW(Transition(580.8e-9, 1.0, 3.3e6, 2e-3));
  CHECK_THROWS_AS(Transition(580.8e-9, 0.0, 3.3e6, 2e-3), DomainError);
  CHECK_THROWS_AS(Transition(580.8e-9, 1.01, 3.3e6, 2e-3), DomainError);
  CHECK_THROWS_AS(Transition(-1.0, 0.5, 3.3e6, 2e-3), DomainError);
  CHECK_THROWS_AS(Transition(580.8e-9, 0.5, 3.3e6, 0.0), DomainError);
  const double floor = 1.0 / (2.0 * constants::pi * 2e-3);
  CHECK_NOTHROW(Transition(580.8e-9, 0.5, floor, 2e-3));
  CHECK_THROWS_AS(Transition(580.8e-9, 0.5, 0.9 * floor, 2e-3), DomainError);
}

TEST_CASE("mirror, geometry and particle invariants") {
  CHECK_NOTHROW(MirrorSpec(0.0, 0.0));
  CHECK_THROWS_AS(MirrorSpec(-1.0, 67.0), DomainError);
  CHECK_THROWS_AS(MirrorSpec(25.0, -1.0), DomainError);

  CHECK_NOTHROW(CavityGeometry(25e-6, 5.808e-6, 20, 8e-12));
  CHECK_THROWS_AS(CavityGeometry(25e-6, 25e-6, 20, 0.0), DomainError);
  CHECK_THROWS_AS(CavityGeometry(25e-6, 30e-6, 20, 0.0), DomainError);
  CHECK_THROWS_AS(CavityGeometry(25e-6, 0.0, 20, 0.0), DomainError);
  CHECK_THROWS_AS(CavityGeometry(25e-6, 5e-6, 0, 0.0), DomainError);
  CHECK_THROWS_AS(CavityGeometry(25e-6, 5e-6, 20, -1e-12), DomainError);

  CHECK_NOTHROW(Nanoparticle(60e-9, 0.003));
  CHECK_THROWS_AS(Nanoparticle(0.0, 0.003), DomainError);
  CHECK_THROWS_AS(Nanoparticle(60e-9, 0.0), DomainError);
  CHECK_THROWS_AS(Nanoparticle(60e-9, 1.0), DomainError);
  CHECK_THROWS_AS(Nanoparticle(60e-9, 0.003, -1.0), DomainError);
  CHECK(Nanoparticle(60e-9, 0.003).with_diameter(70e-9).diameter() == 70e-9);
}

TEST_CASE("loss budget") {
  const LossBudget b(25.0, 200.0, 134.0);
  CHECK(b.total_ppm() == Approx(359.0));
  CHECK(b.total() == Approx(359e-6));
  CHECK(b.with_particle_scatter(13.0).total_ppm() == Approx(372.0));
  CHECK_THROWS_AS(LossBudget(0.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(LossBudget(25.0, -1.0, 134.0), DomainError);
}

TEST_CASE("json round trip of domain types") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double lifetime = 1e-4 + u(rng) * 1e-2;
    const Transition t(400e-9 + u(rng) * 800e-9, 0.001 + 0.999 * u(rng),
                       1.0 / (2.0 * constants::pi * lifetime) * (1.0 + 1e6 * u(rng)), lifetime);
    const MirrorSpec m(u(rng) * 1000.0, u(rng) * 100.0);
    const double radius = 10e-6 + u(rng) * 100e-6;
    const CavityGeometry g(radius, radius * (0.01 + 0.98 * u(rng)), 1 + static_cast<int>(u(rng) * 50),
                           u(rng) * 1e-11);
    const Nanoparticle np(1e-9 + u(rng) * 200e-9, 1e-4 + 0.5 * u(rng), 1e28 + u(rng) * 1e29,
                          1.0 + u(rng));
    const LossBudget b(u(rng) * 500, 1.0 + u(rng) * 500, u(rng) * 200, u(rng) * 50);

    CHECK(json(t).get<Transition>() == t);
    CHECK(json(m).get<MirrorSpec>() == m);
    CHECK(json(g).get<CavityGeometry>() == g);
    CHECK(json(np).get<Nanoparticle>() == np);
    CHECK(json(b).get<LossBudget>() == b);
    CHECK(json::parse(json(t).dump()).get<Transition>() == t);
  }
}

TEST_CASE("json parsing reports the failing field") {
  json j = json(Transition(580.8e-9, 0.007, 3.3e6, 2e-3));
  j.erase("branching_ratio");
  try {
    (void)transition_from_json(j, "/primary/transition");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "/primary/transition/branching_ratio");
  }
  json g = json(CavityGeometry(25e-6, 5.808e-6, 20, 8e-12));
  g["cavity_length"] = 30e-6;
  CHECK_THROWS_AS((void)geometry_from_json(g, "/cavity"), ConfigError);
  g["cavity_length"] = "long";
  CHECK_THROWS_AS((void)geometry_from_json(g, "/cavity"), ConfigError);
}

}
