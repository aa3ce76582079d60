#pragma once

// Seeded Monte-Carlo estimates of ensemble-averaged coupling and of the
// spectral ion statistics inside a single nanoparticle.
//
// Every sampling routine is a pure function of (seed, inputs). Samples are
// grouped in fixed-size blocks, each block drawing from its own stream
// make_stream(seed, block), and partial results are reduced in block order,
// so the output does not depend on the number of worker threads.

#include <cstdint>
#include <span>
#include <vector>

#include "fpcav/parallel.hpp"
#include "fpcav/units.hpp"

namespace fpcav {

inline constexpr std::size_t kSamplesPerBlock = 4096;

/// One enhanced decay channel as seen by an ion at the field maximum with
/// ideal dipole alignment. Jitter and bad-emitter factors are deterministic.
struct ChannelCoupling {
  Transition transition;
  double nominal_purcell = 0.0;
  double kappa = 0.0;
  double jitter_factor = 1.0;
  /// z0 in sin^2(2 pi (z + z0) / lambda); lambda/4 puts an antinode on the mirror.
  double antinode_offset = 0.0;
};

struct EnsembleStats {
  double mean_f_eff = 0.0;
  double std_f_eff = 0.0;
  double max_f_eff = 0.0;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
};

/// Antinode offset lambda/4 - penetration_fraction * lambda.
[[nodiscard]] double antinode_offset(double wavelength, double penetration_fraction = 0.1);

/// |d.e|^2 for a dipole uniformly distributed on the sphere.
[[nodiscard]] double sample_orientation_factor(Rng& rng);

/// Height above the mirror of a uniform point inside a sphere of the given
/// diameter resting on it; the density is 6 z (d - z) / d^3.
[[nodiscard]] double sample_height_in_sphere(double diameter, Rng& rng);

[[nodiscard]] double sample_position_factor(double diameter, double wavelength,
                                            double antinode_offset, Rng& rng);

/// Perfect-ion F_eff summed over channels (orientation = position = 1).
[[nodiscard]] double max_effective_purcell(std::span<const ChannelCoupling> channels);

/// Orientation and height are sampled once per ion and shared by all channels.
[[nodiscard]] EnsembleStats ensemble_purcell_stats(double particle_diameter,
                                                   std::span<const ChannelCoupling> channels,
                                                   std::uint64_t n_samples, std::uint64_t seed,
                                                   unsigned threads = 0);

/// round(volume * cation density * doping).
[[nodiscard]] long long total_ion_count(const Nanoparticle& np);
[[nodiscard]] long long total_ion_count(double diameter, double dopant_concentration,
                                        double cation_density);

/// Hyperfine manifold of one isotope: every ion of this isotope carries all
/// listed lines, offset from its own inhomogeneous center frequency.
struct IsotopeLines {
  double abundance = 1.0;
  std::vector<double> line_offsets{0.0};
};

struct SpectralPopulation {
  long long total_ions = 0;
  double inhomogeneous_fwhm = 0.0;
  double center_frequency = 0.0;
  std::vector<IsotopeLines> isotopes{IsotopeLines{}};

  /// Throws DomainError unless abundances sum to 1 and the rest is sane.
  void validate() const;
};

struct IonCountStats {
  double mean = 0.0;
  double std = 0.0;
  /// Analytic expectation of the count.
  double expected = 0.0;
  std::uint64_t draws = 0;
  std::uint64_t seed = 0;
};

/// Probability that an ion of `isotope` has at least one line inside
/// [probe - bw/2, probe + bw/2]. Infinite bandwidth gives 1.
[[nodiscard]] double addressed_probability(const SpectralPopulation& pop,
                                           const IsotopeLines& isotope, double probe_frequency,
                                           double bandwidth);

[[nodiscard]] double expected_ions_in_bandwidth(const SpectralPopulation& pop,
                                                double probe_frequency, double bandwidth);

/// Distribution of the number of distinct ions with a line inside the band,
/// over `draws` independent placements of the population.
[[nodiscard]] IonCountStats ions_in_bandwidth(const SpectralPopulation& pop,
                                              double probe_frequency, double bandwidth,
                                              std::uint64_t draws, std::uint64_t seed,
                                              unsigned threads = 0);

/// Count rate rate_per_ion * (ions with a line within probe_width/2 of f)
/// for each grid frequency, from one ion placement fixed by `seed`.
[[nodiscard]] std::vector<double> sfs_spectrum(const SpectralPopulation& pop, double probe_width,
                                               std::span<const double> grid, double rate_per_ion,
                                               std::uint64_t seed);

/// Mean of sfs_spectrum over placements.
[[nodiscard]] std::vector<double> expected_sfs_spectrum(const SpectralPopulation& pop,
                                                        double probe_width,
                                                        std::span<const double> grid,
                                                        double rate_per_ion);

}  // namespace fpcav
