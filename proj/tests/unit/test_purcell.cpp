#include <doctest.h>

#include <array>
#include <random>

#include "fpcav/purcell.hpp"
#include "oracles.hpp"

using namespace fpcav;
using doctest::Approx;

namespace {
const Transition t580{580.8e-9, 0.007, 3.3e6, 2e-3};
const Transition t611{611e-9, 0.36, 680e9, 2e-3};
}  // namespace

TEST_SUITE("purcell-coupling") {

TEST_CASE("nominal purcell factor") {
  CHECK(nominal_purcell(580.8e-9, 1.0, 17500, 1.41e-6) == Approx(574.5855118292628).epsilon(1e-12));
  CHECK(nominal_purcell(611e-9, 1.0, 9500, 1.44e-6) == Approx(330.96546099044104).epsilon(1e-12));
  CHECK(nominal_purcell(580.8e-9, 1.0, 35000, 1.41e-6) ==
        Approx(2.0 * nominal_purcell(580.8e-9, 1.0, 17500, 1.41e-6)));
  CHECK(nominal_purcell(580.8e-9, 2.0, 17500, 1.41e-6) ==
        Approx(0.25 * nominal_purcell(580.8e-9, 1.0, 17500, 1.41e-6)));
  CHECK_THROWS_AS((void)nominal_purcell(580.8e-9, 1.0, 0.0, 1.41e-6), DomainError);
}

TEST_CASE("jitter suppression against quadrature") {
  CHECK(jitter_suppression(0.0, 580.8e-9, 17500) == 1.0);
  CHECK(jitter_suppression(8e-12, 580.8e-9, 17500) == Approx(0.6669887417).epsilon(1e-8));
  CHECK(jitter_suppression(8e-12, 611e-9, 9500) == Approx(0.8437879706).epsilon(1e-8));
  CHECK(jitter_suppression(2.5e-12, 580.8e-9, 17500) == Approx(0.9268063856).epsilon(1e-8));

  for (double sigma : {0.1e-12, 1e-12, 4e-12, 8e-12, 20e-12, 100e-12}) {
    for (double f : {1000.0, 9500.0, 17500.0, 60000.0}) {
      CHECK(jitter_suppression(sigma, 580.8e-9, f) ==
            Approx(oracle::jitter_factor(sigma, 580.8e-9, f)).epsilon(1e-7));
    }
  }
  double previous = 1.0;
  for (double sigma = 1e-12; sigma < 1e-9; sigma *= 1.5) {
    const double j = jitter_suppression(sigma, 580.8e-9, 17500);
    CHECK(j < previous);
    CHECK(j > 0.0);
    previous = j;
  }
  CHECK(previous < 0.02);
  CHECK_THROWS_AS((void)jitter_suppression(-1e-12, 580.8e-9, 17500), DomainError);
}

TEST_CASE("effective purcell factor") {
  const double kappa = 1.474615110e9;
  const double fe = effective_purcell(t580, 574.5855118292628, kappa, {});
  CHECK(fe == Approx(4.013117738618697).epsilon(1e-9));

  const Transition sharp{580.8e-9, 0.007, 1.0 / (2.0 * constants::pi * 2e-3), 2e-3};
  CHECK(effective_purcell(sharp, 500.0, 1e12, {}) == Approx(0.007 * 500.0).epsilon(1e-9));

  const CouplingDegradation d(0.5, 1.0, 0.25, 0.8);
  CHECK(effective_purcell(t580, 574.6, kappa, d) ==
        Approx(0.1 * effective_purcell(t580, 574.6, kappa, {})));
  CHECK(d.product() == Approx(0.1));
  CHECK_THROWS_AS(CouplingDegradation(0.0, 1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(CouplingDegradation(1.0, 1.0, 1.5, 1.0), DomainError);
}

TEST_CASE("effective purcell monotonicity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double fp = 100.0 + 900.0 * u(rng);
    const double kappa = 1e9 * (0.5 + 5.0 * u(rng));
    const CouplingDegradation d(u(rng), 1.0, u(rng), u(rng));
    const double base = effective_purcell(t611, fp, kappa, d);
    CHECK(effective_purcell(t611, 1.1 * fp, kappa, d) > base);
    CHECK(effective_purcell(t611, fp, 1.1 * kappa, d) > base);
    const Transition broader{611e-9, 0.36, 1.1 * 680e9, 2e-3};
    CHECK(effective_purcell(broader, fp, kappa, d) < base);
    CHECK(base <= 0.36 * fp);
  }
}

TEST_CASE("multimodal sum") {
  const std::array<double, 2> f{2.5, 0.47};
  CHECK(multimodal_sum(f) == 2.5 + 0.47);
  const std::array<double, 3> a{0.1, 1.7, 3.2};
  const std::array<double, 3> b{3.2, 0.1, 1.7};
  CHECK(multimodal_sum(a) == Approx(multimodal_sum(b)).epsilon(1e-15));
  CHECK(multimodal_sum(std::span<const double>{}) == 0.0);
  const std::array<double, 2> bad{1.0, -0.1};
  CHECK_THROWS_AS((void)multimodal_sum(bad), DomainError);
}

TEST_CASE("lifetime inversion") {
  CHECK(purcell_from_lifetimes(2e-3, 1e-3).effective_purcell == Approx(1.0));
  CHECK(purcell_from_lifetimes(2e-3, 1.3e-3).effective_purcell == Approx(0.5384615384615385));
  CHECK(purcell_from_lifetimes(2e-3, 2e-3).effective_purcell == 0.0);
  const auto slow = purcell_from_lifetimes(2e-3, 2.5e-3);
  CHECK(slow.suppressed);
  CHECK(!slow.warning.empty());
  CHECK(ideal_purcell_from_effective(1.0, 0.007) == Approx(142.857142857));
  CHECK(ideal_purcell_from_effective(0.54, 0.007) == Approx(77.142857143));
  CHECK(cavity_branching(1.0, 0.007) == Approx(0.5035));
  CHECK(cavity_branching(0.0, 0.007) == Approx(0.007));
  CHECK(cavity_branching(1e9, 0.007) == Approx(1.0).epsilon(1e-8));

  for (double fe : {0.0, 0.3, 1.0, 5.6}) {
    const double t1c = 2e-3 / (fe + 1.0);
    CHECK(purcell_from_lifetimes(2e-3, t1c).effective_purcell == Approx(fe).epsilon(1e-12));
  }
}

TEST_CASE("coupling rate and cooperativity") {
  CHECK(coupling_rate_g(3.4, 1.8e9, 3.3e6, 2e-3) == Approx(349251.69473173114).epsilon(1e-12));
  CHECK(coupling_rate_g(0.47, 2.5e9, 7e11, 2e-3) == Approx(2562932.483878734).epsilon(1e-12));
  CHECK(coupling_rate_g(0.0, 2.5e9, 7e11, 2e-3) == 0.0);
  CHECK(cooperativity(0.4e6, 1.8e9, 3.3e6) == Approx(1.075469383571197e-4).epsilon(1e-12));
  CHECK(cooperativity(2.4e6, 2.5e9, 7e11) == Approx(4.6853075749872903e-11).epsilon(1e-12));
  CHECK(cooperativity(0.0, 2.5e9, 7e11) == 0.0);

  // C = F_eff gamma / Gamma_h for g derived from F_eff.
  for (double fe : {0.1, 1.0, 3.75}) {
    const double g = coupling_rate_g(fe, 1.6e9, 3.3e6, 2e-3);
    CHECK(cooperativity(g, 1.6e9, 3.3e6) ==
          Approx(fe * (1.0 / 2e-3) / to_angular(3.3e6)).epsilon(1e-12));
  }
}

TEST_CASE("saturation intensity and power") {
  const double i = saturation_intensity(3.3e6, 0.007, 580.8e-9);
  CHECK(i == Approx(19760.647158636988).epsilon(1e-12));
  CHECK(saturation_power(i, 1.41e-6) == Approx(6.171052851528865e-08).epsilon(1e-12));
  CHECK(saturation_intensity(6.6e6, 0.007, 580.8e-9) == Approx(2.0 * i));
  CHECK_THROWS_AS((void)saturation_power(i, 0.0), DomainError);
}

TEST_CASE("coupling report consistency") {
  const auto r = make_coupling_report(t580, 580.0, 1.6e9, {});
  CHECK(r.effective_purcell == Approx(0.007 * 580.0 * 1.6e9 / (1.6e9 + 3.3e6)));
  CHECK(r.cooperativity == Approx(r.effective_purcell * 500.0 / to_angular(3.3e6)));
  const Transition pure{580.8e-9, 1.0, 1.0 / (2.0 * constants::pi * 2e-3), 2e-3};
  const auto ideal = make_coupling_report(pure, 580.0, 1e15, {});
  CHECK(ideal.effective_purcell == Approx(ideal.nominal_purcell).epsilon(1e-9));
}

}
