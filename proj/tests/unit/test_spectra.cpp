#include <doctest.h>

#include <cmath>
#include <limits>

#include "fpcav/fit.hpp"
#include "fpcav/spectra.hpp"

using namespace fpcav;
using doctest::Approx;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("spectra-sim") {

TEST_CASE("grids") {
  const auto lin = linspace(-1.0, 1.0, 5);
  CHECK(lin == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  const auto log = logspace(1e3, 4e5, 261);
  CHECK(log.front() == 1e3);
  CHECK(log.back() == 4e5);
  CHECK(log[130] == Approx(std::sqrt(1e3 * 4e5)));
  CHECK_THROWS_AS((void)logspace(0.0, 1.0, 3), DomainError);
}

TEST_CASE("ple scan peak and width") {
  const auto grid = linspace(-100e9, 100e9, 401);
  PleParams p{34e9, 0.0, 1000.0, 20.0};
  const auto t = ple_scan(p, grid);
  CHECK(t.y[200] == Approx(1020.0));
  CHECK(t.y[0] > 20.0);
  CHECK(unit_lorentzian(17e9, 0.0, 34e9) == Approx(0.5));

  const auto model = FitModel::make(ModelId::lorentzian);
  const auto r = fit(model, t, auto_initial_guess(model, t));
  CHECK(r.converged);
  CHECK(r.value("fwhm") == Approx(34e9).epsilon(1e-8));
  CHECK(r.value("amplitude") == Approx(1000.0).epsilon(1e-8));
}

TEST_CASE("ple scan with fine structure keeps the mean shape") {
  const auto grid = linspace(-100e9, 100e9, 401);
  SpectralPopulation pop;
  pop.total_ions = 18118;
  pop.inhomogeneous_fwhm = 34e9;
  const FineStructure fs{pop, 4.5e6};
  const auto a = ple_scan({34e9, 0.0, 1000.0, 20.0}, grid, fs, NoiseModel::none, 3);
  const auto b = ple_scan({34e9, 0.0, 1000.0, 20.0}, grid, fs, NoiseModel::none, 3);
  CHECK(a.y == b.y);
  const auto clean = ple_scan({34e9, 0.0, 1000.0, 20.0}, grid);
  double sum = 0.0;
  double clean_sum = 0.0;
  for (std::size_t i = 180; i <= 220; ++i) {
    sum += a.y[i] - 20.0;
    clean_sum += clean.y[i] - 20.0;
  }
  // About 3 ions per window: the 41-point average lies within 4 sigma.
  CHECK(sum / clean_sum == Approx(1.0).epsilon(0.4));
  CHECK(a.y != clean.y);
}

TEST_CASE("saturation curve") {
  const auto powers = logspace(0.05, 20.0, 25);
  const auto t = saturation_curve(powers, 105.0, 0.38);
  for (std::size_t i = 0; i < powers.size(); ++i) {
    CHECK(t.y[i] == Approx(105.0 * std::pow(powers[i], 0.38)));
  }
  const std::vector<double> one{1.0, 4.0};
  const auto s = saturation_curve(one, 100.0, 0.5, 7.0);
  CHECK(s.y[0] == Approx(107.0));
  CHECK(s.y[1] == Approx(207.0));
  CHECK_THROWS_AS((void)saturation_curve(one, 100.0, 0.0), DomainError);
  CHECK_THROWS_AS((void)saturation_curve(one, 100.0, 1.2), DomainError);
}

TEST_CASE("saturation exponent recovered from counts") {
  const auto powers = logspace(0.05, 20.0, 25);
  const auto model = FitModel::make(ModelId::power_law);
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t = saturation_curve(powers, 105.0, 0.38, 0.0, NoiseModel::poisson, seed);
    FitOptions opt;
    opt.weighting = Weighting::poisson;
    const auto r = fit(model, t, auto_initial_guess(model, t), opt);
    REQUIRE(r.converged);
    if (std::abs(r.value("beta") - 0.38) < 3.0 * r.error("beta")) ++inside;
  }
  CHECK(inside >= 18);
}

TEST_CASE("hole spectrum endpoints") {
  for (int n : {1, 2, 4, 9, 16}) {
    const HoleParams p{n, 1.0, 6.6e6, 100.0};
    const std::vector<double> d{0.0, kInf};
    const auto t = hole_spectrum(p, d);
    CHECK(t.y[1] / t.y[0] == Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-15));
    CHECK(t.y[1] == 100.0 * n);
  }
  const HoleParams single{1, 2.0, 6.6e6, 100.0};
  const auto flat = hole_spectrum(single, linspace(-20e6, 20e6, 41));
  for (double v : flat.y) CHECK(v == Approx(100.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS((void)hole_spectrum({0, 1.0, 1.0, 1.0}, flat.x), DomainError);
}

TEST_CASE("hole width conversion") {
  CHECK(hole_width_to_homogeneous(6.6e6, 0.0) == Approx(3.3e6));
  CHECK(hole_width_to_homogeneous(1.0e6, 0.5e6) == 0.0);
  CHECK(hole_width_to_homogeneous(8.0e6, 0.2e6) - hole_width_to_homogeneous(6.0e6, 0.2e6) ==
        Approx(1.0e6));
  CHECK_THROWS_AS((void)hole_width_to_homogeneous(0.3e6, 0.2e6), DomainError);
}

TEST_CASE("power broadening") {
  CHECK(power_broadening(0.0, 0.45e6, 3.3e6) == 3.3e6);
  const double b1 = power_broadening(50.0, 0.45e6, 3.3e6) - 3.3e6;
  const double b4 = power_broadening(200.0, 0.45e6, 3.3e6) - 3.3e6;
  CHECK(b4 == Approx(2.0 * b1));

  std::vector<double> powers{2, 5, 10, 20, 35, 50, 70, 90, 115, 140};
  Trace t;
  for (double p : powers) {
    t.x.push_back(p);
    t.y.push_back(power_broadening(p, 0.45e6, 3.3e6));
  }
  const auto model = FitModel::make(ModelId::sqrt_offset);
  const auto r = fit(model, t, auto_initial_guess(model, t));
  CHECK(r.value("gamma0") == Approx(3.3e6).epsilon(1e-8));
  CHECK(r.value("alpha") == Approx(0.45e6).epsilon(1e-8));
}

TEST_CASE("decay histogram") {
  const double t1c = cavity_enhanced_lifetime(2e-3, 0.82);
  CHECK(t1c == Approx(2e-3 / 1.82));
  const auto bins = linspace(0.0, 10e-3, 200);
  const auto clean = decay_histogram(t1c, bins, 1e4, 1.0, 1e-3, NoiseModel::none);
  CHECK(clean.y[0] == Approx(1e4 * 1.001));
  const auto model = FitModel::make(ModelId::exp_decay);
  const auto exact = fit(model, clean, auto_initial_guess(model, clean));
  CHECK(exact.value("lifetime") == Approx(t1c).epsilon(1e-9));

  const auto noisy = decay_histogram(2e-3, bins, 1e4, 1.0, 1e-3, NoiseModel::poisson, 21);
  for (double v : noisy.y) {
    CHECK(v >= 0.0);
    CHECK(v == std::floor(v));
  }
  FitOptions opt;
  opt.weighting = Weighting::poisson;
  const auto r = fit(model, noisy, auto_initial_guess(model, noisy), opt);
  CHECK(r.value("lifetime") == Approx(2e-3).epsilon(0.05));
  CHECK_THROWS_AS((void)cavity_enhanced_lifetime(2e-3, -1.0), DomainError);
}

TEST_CASE("poisson noise averages to the model") {
  const auto bins = linspace(0.0, 5e-3, 50);
  std::vector<double> sum(bins.size(), 0.0);
  const int runs = 400;
  for (int s = 0; s < runs; ++s) {
    const auto t = decay_histogram(1e-3, bins, 100.0, 1.0, 0.05, NoiseModel::poisson, 1000 + s);
    for (std::size_t i = 0; i < bins.size(); ++i) sum[i] += t.y[i];
  }
  const auto mean = decay_histogram(1e-3, bins, 100.0, 1.0, 0.05, NoiseModel::none);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double sigma = std::sqrt(mean.y[i] / runs);
    CHECK(std::abs(sum[i] / runs - mean.y[i]) < 5.0 * sigma);
  }
  const auto a = decay_histogram(1e-3, bins, 100.0, 1.0, 0.05, NoiseModel::poisson, 5);
  const auto b = decay_histogram(1e-3, bins, 100.0, 1.0, 0.05, NoiseModel::poisson, 5);
  CHECK(a.y == b.y);
}

TEST_CASE("trace validation") {
  Trace t{{0.0, 1.0, 1.0}, {1.0, 2.0, 3.0}};
  CHECK_THROWS_AS(t.validate(), DomainError);
  Trace u{{0.0, 1.0}, {1.0}};
  CHECK_THROWS_AS(u.validate(), DomainError);
}

}
