#include "fpcav/purcell.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fpcav {

using constants::pi;

namespace {

bool in_unit_range(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

CouplingDegradation::CouplingDegradation(double jitter_factor, double bad_emitter_factor,
                                         double orientation_factor, double position_factor)
    : jitter_(jitter_factor),
      bad_emitter_(bad_emitter_factor),
      orientation_(orientation_factor),
      position_(position_factor) {
  if (!(jitter_ > 0.0 && jitter_ <= 1.0)) throw DomainError("jitter factor must lie in (0, 1]");
  if (!(bad_emitter_ > 0.0 && bad_emitter_ <= 1.0)) {
    throw DomainError("bad-emitter factor must lie in (0, 1]");
  }
  if (!in_unit_range(orientation_)) throw DomainError("orientation factor must lie in [0, 1]");
  if (!in_unit_range(position_)) throw DomainError("position factor must lie in [0, 1]");
}

double nominal_purcell(double wavelength, double refractive_index, double finesse,
                       double waist) {
  if (!(wavelength > 0.0 && refractive_index > 0.0 && finesse > 0.0 && waist > 0.0)) {
    throw DomainError("nominal_purcell: all inputs must be positive");
  }
  const double reduced = wavelength / refractive_index;
  return 6.0 / (pi * pi * pi) * reduced * reduced * finesse / (waist * waist);
}

double jitter_suppression(double rms_jitter, double wavelength, double finesse) {
  if (rms_jitter < 0.0) throw DomainError("jitter must be >= 0");
  if (!(wavelength > 0.0 && finesse > 0.0)) {
    throw DomainError("jitter_suppression: wavelength and finesse must be positive");
  }
  if (rms_jitter == 0.0) return 1.0;

  // In units of sigma: E[1/(1+(u r)^2)] with u ~ N(0,1), r = sigma / x_hw.
  const double half_width = wavelength / (4.0 * finesse);
  const double r = rms_jitter / half_width;
  const auto integrand = [r](double u) {
    const double gauss = std::exp(-0.5 * u * u) / std::sqrt(2.0 * pi);
    return gauss / (1.0 + u * u * r * r);
  };
  double error = 0.0;
  const double half = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-12, &error);
  return 2.0 * half;
}

double bad_emitter_factor(double kappa, double homogeneous_linewidth) {
  if (!(kappa > 0.0) || homogeneous_linewidth < 0.0) {
    throw DomainError("bad_emitter_factor: need kappa > 0 and linewidth >= 0");
  }
  return kappa / (kappa + homogeneous_linewidth);
}

double effective_purcell(const Transition& transition, double nominal, double kappa,
                         const CouplingDegradation& degradation) {
  if (nominal < 0.0) throw DomainError("nominal Purcell factor must be >= 0");
  return transition.branching_ratio() * nominal *
         bad_emitter_factor(kappa, transition.homogeneous_linewidth()) *
         degradation.jitter_factor() * degradation.orientation_factor() *
         degradation.position_factor();
}

double multimodal_sum(std::span<const double> factors) {
  for (double f : factors) {
    if (f < 0.0) throw DomainError("multimodal_sum: factors must be >= 0");
  }
  return std::accumulate(factors.begin(), factors.end(), 0.0);
}

LifetimePurcell purcell_from_lifetimes(double free_space_lifetime, double cavity_lifetime) {
  if (!(free_space_lifetime > 0.0 && cavity_lifetime > 0.0)) {
    throw DomainError("lifetimes must be positive");
  }
  LifetimePurcell out;
  out.effective_purcell = free_space_lifetime / cavity_lifetime - 1.0;
  if (cavity_lifetime > free_space_lifetime) {
    out.suppressed = true;
    out.warning = "cavity lifetime exceeds free-space lifetime; Purcell suppression is not modeled";
  }
  return out;
}

double ideal_purcell_from_effective(double effective, double branching_ratio) {
  if (!(branching_ratio > 0.0)) throw DomainError("branching ratio must be positive");
  return effective / branching_ratio;
}

double cavity_branching(double effective, double branching_ratio) {
  if (effective < 0.0) throw DomainError("effective Purcell factor must be >= 0");
  if (!(branching_ratio > 0.0 && branching_ratio <= 1.0)) {
    throw DomainError("branching ratio must lie in (0, 1]");
  }
  return (effective + branching_ratio) / (effective + 1.0);
}

double coupling_rate_g(double effective, double kappa, double homogeneous_linewidth,
                       double free_space_lifetime) {
  if (effective < 0.0 || !(kappa > 0.0) || homogeneous_linewidth < 0.0 ||
      !(free_space_lifetime > 0.0)) {
    throw DomainError("coupling_rate_g: invalid input");
  }
  const double gamma = 1.0 / free_space_lifetime;
  const double g_sq =
      effective * gamma * (to_angular(kappa) + to_angular(homogeneous_linewidth)) / 4.0;
  return to_ordinary(std::sqrt(g_sq));
}

double cooperativity(double g, double kappa, double homogeneous_linewidth) {
  if (!(kappa > 0.0 && homogeneous_linewidth > 0.0)) {
    throw DomainError("cooperativity: kappa and linewidth must be positive");
  }
  const double g_ang = to_angular(g);
  return 4.0 * g_ang * g_ang /
         ((to_angular(kappa) + to_angular(homogeneous_linewidth)) *
          to_angular(homogeneous_linewidth));
}

double saturation_intensity(double homogeneous_linewidth, double branching_ratio,
                            double wavelength) {
  if (!(homogeneous_linewidth > 0.0 && branching_ratio > 0.0 && wavelength > 0.0)) {
    throw DomainError("saturation_intensity: inputs must be positive");
  }
  return 4.0 * pi * pi * pi / 3.0 * constants::hbar * constants::speed_of_light *
         to_angular(homogeneous_linewidth) /
         (branching_ratio * wavelength * wavelength * wavelength);
}

double saturation_power(double intensity, double waist) {
  if (!(intensity > 0.0 && waist > 0.0)) {
    throw DomainError("saturation_power: inputs must be positive");
  }
  return intensity * pi * waist * waist / 2.0;
}

CouplingReport make_coupling_report(const Transition& transition, double nominal,
                                    double kappa, const CouplingDegradation& degradation) {
  CouplingReport r;
  r.wavelength = transition.wavelength();
  r.nominal_purcell = nominal;
  r.effective_purcell = effective_purcell(transition, nominal, kappa, degradation);
  r.cavity_linewidth = kappa;
  r.homogeneous_linewidth = transition.homogeneous_linewidth();
  r.coupling_rate_g = coupling_rate_g(r.effective_purcell, kappa, r.homogeneous_linewidth,
                                      transition.free_space_lifetime());
  r.cooperativity = cooperativity(r.coupling_rate_g, kappa, r.homogeneous_linewidth);
  r.cavity_branching = cavity_branching(r.effective_purcell, transition.branching_ratio());
  return r;
}

}  // namespace fpcav
