// Regenerates data/hole_series.csv: homogeneous linewidth versus probe power
// extracted from simulated transient-hole spectra.
//
// usage: fpcav_make_hole_series OUT.csv

#include <cmath>
#include <iostream>
#include <vector>

#include "fpcav/fit.hpp"
#include "fpcav/spectra.hpp"
#include "fpcav/trace_io.hpp"

int main(int argc, char** argv) {
  using namespace fpcav;
  if (argc != 2) {
    std::cerr << "usage: fpcav_make_hole_series OUT.csv\n";
    return 2;
  }
  constexpr double gamma0 = 3.3e6;
  constexpr double alpha1 = 0.45e6;  // Hz per sqrt(nW)
  constexpr double laser = 0.2e6;
  constexpr double knee = 150.0;     // nW; linear growth above
  constexpr std::uint64_t seed = 515;
  const std::vector<double> powers{2, 5, 10, 20, 35, 50, 70, 90, 115, 140, 200, 300, 400, 500};

  Trace series;
  json points = json::array();
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const double p = powers[i];
    double gamma_h = power_broadening(std::min(p, knee), alpha1, gamma0);
    if (p > knee) gamma_h += alpha1 / (2.0 * std::sqrt(knee)) * (p - knee) * 1.8;
    const double hole = 2.0 * (gamma_h + laser);
    const auto grid = linspace(-5.0 * hole, 5.0 * hole, 121);
    const Trace t = hole_spectrum(HoleParams{4, 1.0, hole, 150.0}, grid, NoiseModel::poisson,
                                  seed + i);
    const FitResult r = fit(FitModel::make(ModelId::inverted_lorentzian), t,
                            auto_initial_guess(FitModel::make(ModelId::inverted_lorentzian), t),
                            {Weighting::poisson});
    const double measured = hole_width_to_homogeneous(r.value("fwhm"), laser);
    series.x.push_back(p);
    series.y.push_back(measured);
    points.push_back({{"power_nw", p}, {"hole_fwhm", r.value("fwhm")},
                      {"hole_fwhm_error", r.error("fwhm")}, {"converged", r.converged}});
  }
  write_trace_file(argv[1], series);
  write_json_file(sidecar_path(argv[1]),
                  json{{"x", "probe_power_nw"}, {"y", "homogeneous_linewidth_hz"},
                       {"gamma0", gamma0}, {"alpha1", alpha1}, {"laser_linewidth", laser},
                       {"linear_above_nw", knee}, {"teeth", 4}, {"r0", 150.0},
                       {"seed", seed}, {"holes", points}});
  return 0;
}
