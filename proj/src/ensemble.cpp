#include "fpcav/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <utility>

namespace fpcav {

using constants::pi;

unsigned default_thread_count() {
  if (const char* env = std::getenv("FPCAV_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double antinode_offset(double wavelength, double penetration_fraction) {
  return wavelength / 4.0 - penetration_fraction * wavelength;
}

double sample_orientation_factor(Rng& rng) {
  // cos(theta) is uniform on [-1, 1] for an isotropic direction.
  std::uniform_real_distribution<double> cos_theta(-1.0, 1.0);
  const double c = cos_theta(rng);
  return c * c;
}

double sample_height_in_sphere(double diameter, Rng& rng) {
  // The median of three uniforms is Beta(2,2), i.e. density 6 u (1 - u).
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double a = unit(rng);
  double b = unit(rng);
  double c = unit(rng);
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return diameter * b;
}

double sample_position_factor(double diameter, double wavelength, double antinode_offset,
                              Rng& rng) {
  if (!(diameter > 0.0)) throw DomainError("particle diameter must be positive");
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  const double z = sample_height_in_sphere(diameter, rng);
  const double s = std::sin(2.0 * pi * (z + antinode_offset) / wavelength);
  return s * s;
}

namespace {

double perfect_channel(const ChannelCoupling& ch) {
  const double kappa = ch.kappa;
  return ch.transition.branching_ratio() * ch.nominal_purcell *
         (kappa / (kappa + ch.transition.homogeneous_linewidth())) * ch.jitter_factor;
}

struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double max = 0.0;

  void push(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
    max = std::max(max, v);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
    max = std::max(max, o.max);
  }
};

std::size_t block_count_for(std::uint64_t n) {
  return static_cast<std::size_t>((n + kSamplesPerBlock - 1) / kSamplesPerBlock);
}

}  // namespace

double max_effective_purcell(std::span<const ChannelCoupling> channels) {
  double total = 0.0;
  for (const auto& ch : channels) total += perfect_channel(ch);
  return total;
}

EnsembleStats ensemble_purcell_stats(double particle_diameter,
                                     std::span<const ChannelCoupling> channels,
                                     std::uint64_t n_samples, std::uint64_t seed,
                                     unsigned threads) {
  if (n_samples < 1) throw DomainError("ensemble: need at least one sample");
  if (!(particle_diameter > 0.0)) throw DomainError("ensemble: particle diameter must be > 0");
  if (channels.empty()) throw DomainError("ensemble: no coupled channels");

  std::vector<double> perfect;
  perfect.reserve(channels.size());
  for (const auto& ch : channels) perfect.push_back(perfect_channel(ch));

  const std::size_t blocks = block_count_for(n_samples);
  std::vector<Moments> partial(blocks);
  for_each_block(blocks, threads, [&](std::size_t b) {
    Rng rng = make_stream(seed, b);
    const std::uint64_t begin = b * kSamplesPerBlock;
    const std::uint64_t end = std::min<std::uint64_t>(n_samples, begin + kSamplesPerBlock);
    Moments m;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double orientation = sample_orientation_factor(rng);
      const double z = sample_height_in_sphere(particle_diameter, rng);
      double f = 0.0;
      for (std::size_t c = 0; c < channels.size(); ++c) {
        const double s =
            std::sin(2.0 * pi * (z + channels[c].antinode_offset) / channels[c].transition.wavelength());
        f += perfect[c] * orientation * s * s;
      }
      m.push(f);
    }
    partial[b] = m;
  });

  Moments total;
  for (const auto& m : partial) total.merge(m);

  EnsembleStats stats;
  stats.mean_f_eff = total.mean;
  stats.std_f_eff = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1)) : 0.0;
  stats.max_f_eff = max_effective_purcell(channels);
  stats.sample_count = n_samples;
  stats.seed = seed;
  return stats;
}

long long total_ion_count(double diameter, double dopant_concentration, double cation_density) {
  if (diameter < 0.0 || dopant_concentration < 0.0 || cation_density < 0.0) {
    throw DomainError("ion count: inputs must be >= 0");
  }
  const double volume = pi / 6.0 * diameter * diameter * diameter;
  return std::llround(volume * cation_density * dopant_concentration);
}

long long total_ion_count(const Nanoparticle& np) {
  return total_ion_count(np.diameter(), np.dopant_concentration(), np.cation_density());
}

void SpectralPopulation::validate() const {
  if (total_ions < 0) throw DomainError("population: total_ions must be >= 0");
  if (!(inhomogeneous_fwhm > 0.0)) throw DomainError("population: inhomogeneous_fwhm must be > 0");
  if (!std::isfinite(center_frequency)) throw DomainError("population: center_frequency not finite");
  if (isotopes.empty()) throw DomainError("population: no isotopes");
  double sum = 0.0;
  for (const auto& iso : isotopes) {
    if (!(iso.abundance >= 0.0)) throw DomainError("population: abundance must be >= 0");
    if (iso.line_offsets.empty()) throw DomainError("population: isotope without lines");
    sum += iso.abundance;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("population: abundances must sum to 1");
}

namespace {

double lorentzian_cdf(double x, double center, double fwhm) {
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  return 0.5 + std::atan(2.0 * (x - center) / fwhm) / pi;
}

double band_probability(double center, double fwhm, const std::vector<double>& offsets,
                        double lo, double hi) {
  // An ion centered at c is addressed if c + offset_k lies in [lo, hi] for
  // some k, i.e. c in the union of [lo - off_k, hi - off_k].
  std::vector<std::pair<double, double>> spans;
  spans.reserve(offsets.size());
  for (double off : offsets) spans.emplace_back(lo - off, hi - off);
  std::sort(spans.begin(), spans.end());
  double p = 0.0;
  double cur_lo = spans.front().first;
  double cur_hi = spans.front().second;
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first <= cur_hi) {
      cur_hi = std::max(cur_hi, spans[i].second);
    } else {
      p += lorentzian_cdf(cur_hi, center, fwhm) - lorentzian_cdf(cur_lo, center, fwhm);
      cur_lo = spans[i].first;
      cur_hi = spans[i].second;
    }
  }
  p += lorentzian_cdf(cur_hi, center, fwhm) - lorentzian_cdf(cur_lo, center, fwhm);
  return std::clamp(p, 0.0, 1.0);
}

void check_band(double bandwidth) {
  if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
}

}  // namespace

double addressed_probability(const SpectralPopulation& pop, const IsotopeLines& isotope,
                             double probe_frequency, double bandwidth) {
  check_band(bandwidth);
  if (std::isinf(bandwidth)) return 1.0;
  return band_probability(pop.center_frequency, pop.inhomogeneous_fwhm, isotope.line_offsets,
                          probe_frequency - bandwidth / 2.0, probe_frequency + bandwidth / 2.0);
}

double expected_ions_in_bandwidth(const SpectralPopulation& pop, double probe_frequency,
                                  double bandwidth) {
  pop.validate();
  double mean = 0.0;
  for (const auto& iso : pop.isotopes) {
    mean += static_cast<double>(pop.total_ions) * iso.abundance *
            addressed_probability(pop, iso, probe_frequency, bandwidth);
  }
  return mean;
}

IonCountStats ions_in_bandwidth(const SpectralPopulation& pop, double probe_frequency,
                                double bandwidth, std::uint64_t draws, std::uint64_t seed,
                                unsigned threads) {
  pop.validate();
  check_band(bandwidth);
  if (draws < 1) throw DomainError("ions_in_bandwidth: need at least one draw");

  std::vector<double> p_iso;
  for (const auto& iso : pop.isotopes) {
    p_iso.push_back(addressed_probability(pop, iso, probe_frequency, bandwidth));
  }

  // Per placement: split the ions over isotopes (sequential binomials), then
  // each ion is independently addressed with its isotope's probability.
  const std::size_t blocks = block_count_for(draws);
  std::vector<Moments> partial(blocks);
  for_each_block(blocks, threads, [&](std::size_t b) {
    Rng rng = make_stream(seed, b);
    const std::uint64_t begin = b * kSamplesPerBlock;
    const std::uint64_t end = std::min<std::uint64_t>(draws, begin + kSamplesPerBlock);
    Moments m;
    for (std::uint64_t i = begin; i < end; ++i) {
      long long remaining = pop.total_ions;
      double weight_left = 1.0;
      long long addressed = 0;
      for (std::size_t k = 0; k < pop.isotopes.size(); ++k) {
        long long n_k = remaining;
        if (k + 1 < pop.isotopes.size()) {
          const double share =
              weight_left > 0.0 ? std::clamp(pop.isotopes[k].abundance / weight_left, 0.0, 1.0)
                                : 0.0;
          n_k = std::binomial_distribution<long long>(remaining, share)(rng);
        }
        remaining -= n_k;
        weight_left -= pop.isotopes[k].abundance;
        if (n_k > 0) addressed += std::binomial_distribution<long long>(n_k, p_iso[k])(rng);
      }
      m.push(static_cast<double>(addressed));
    }
    partial[b] = m;
  });

  Moments total;
  for (const auto& m : partial) total.merge(m);

  IonCountStats out;
  out.mean = total.mean;
  out.std = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1)) : 0.0;
  out.expected = expected_ions_in_bandwidth(pop, probe_frequency, bandwidth);
  out.draws = draws;
  out.seed = seed;
  return out;
}

std::vector<double> sfs_spectrum(const SpectralPopulation& pop, double probe_width,
                                 std::span<const double> grid, double rate_per_ion,
                                 std::uint64_t seed) {
  pop.validate();
  check_band(probe_width);
  if (!std::is_sorted(grid.begin(), grid.end())) throw DomainError("sfs: grid must be sorted");

  std::vector<double> weights;
  for (const auto& iso : pop.isotopes) weights.push_back(iso.abundance);
  std::discrete_distribution<std::size_t> pick_isotope(weights.begin(), weights.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Rng rng = make_stream(seed, 0);

  struct Line {
    double frequency;
    long long ion;
  };
  std::vector<Line> lines;
  for (long long ion = 0; ion < pop.total_ions; ++ion) {
    const auto& iso = pop.isotopes[pick_isotope(rng)];
    const double center =
        pop.center_frequency + pop.inhomogeneous_fwhm / 2.0 * std::tan(pi * (unit(rng) - 0.5));
    for (double off : iso.line_offsets) lines.push_back({center + off, ion});
  }
  std::sort(lines.begin(), lines.end(),
            [](const Line& a, const Line& b) { return a.frequency < b.frequency; });

  std::vector<double> out(grid.size(), 0.0);
  std::vector<long long> ions;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lo = grid[i] - probe_width / 2.0;
    const double hi = grid[i] + probe_width / 2.0;
    auto first = std::lower_bound(lines.begin(), lines.end(), lo,
                                  [](const Line& l, double f) { return l.frequency < f; });
    ions.clear();
    for (auto it = first; it != lines.end() && it->frequency <= hi; ++it) ions.push_back(it->ion);
    std::sort(ions.begin(), ions.end());
    const auto distinct = std::unique(ions.begin(), ions.end()) - ions.begin();
    out[i] = rate_per_ion * static_cast<double>(distinct);
  }
  return out;
}

std::vector<double> expected_sfs_spectrum(const SpectralPopulation& pop, double probe_width,
                                          std::span<const double> grid, double rate_per_ion) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double f : grid) out.push_back(rate_per_ion * expected_ions_in_bandwidth(pop, f, probe_width));
  return out;
}

}  // namespace fpcav
