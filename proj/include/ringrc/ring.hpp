// Ring-geometry utilities and the linear (cold-cavity) transmission oracle.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ringrc/common.hpp"
#include "ringrc/params.hpp"

namespace ringrc {

// Angular resonance frequency of longitudinal mode l: omega = c*l/(n_eff*R).
inline double resonance_frequency(const physical_params& p, int mode_number) {
  if (mode_number < 1) throw config_error("mode_number must be >= 1");
  double radius = p.ring_circumference_m / two_pi;
  return speed_of_light_m_s * mode_number / (p.si_refractive_index * radius);
}

// Mode number whose resonance lies closest to the given wavelength.
inline int mode_number_near(const physical_params& p, double wavelength_m) {
  double radius = p.ring_circumference_m / two_pi;
  return static_cast<int>(
      std::lround(p.si_refractive_index * two_pi * radius / wavelength_m));
}

// Free spectral range in wavelength units: lambda^2 / (2*pi*R*n_g).
inline double free_spectral_range(const physical_params& p, double wavelength_m,
                                  double group_index) {
  if (!(wavelength_m > 0.0)) throw config_error("wavelength must be > 0");
  if (!(group_index > 0.0)) throw config_error("group index must be > 0");
  double radius = p.ring_circumference_m / two_pi;
  return wavelength_m * wavelength_m / (two_pi * radius * group_index);
}

// FSR in ordinary frequency: c / (n_g * L).
inline double free_spectral_range_hz(const physical_params& p, double group_index) {
  return speed_of_light_m_s / (group_index * p.ring_circumference_m);
}

struct spectrum_point {
  double detuning_rad_s;
  double through_power;  // fraction of input power
  double drop_power;     // fraction of input power
};

// Steady-state linear response with feedback off and nonlinear terms zero.
// Drop fraction is kappa_c^4/(delta^2 + gamma_lin^2); the through fraction is
// what remains after the drop port and intrinsic dissipation.
inline std::vector<spectrum_point> linear_transmission_spectrum(
    const physical_params& p, const std::vector<double>& detunings_rad_s) {
  double kc2 = 2.0 / p.coupling_lifetime_s;
  double gamma = p.linear_loss_rate();
  double intrinsic = p.intrinsic_loss_rate();
  std::vector<spectrum_point> out;
  out.reserve(detunings_rad_s.size());
  for (double d : detunings_rad_s) {
    double lorentz = 1.0 / (d * d + gamma * gamma);
    double drop = kc2 * kc2 * lorentz;
    double dissipated = 2.0 * intrinsic * kc2 * lorentz;
    out.push_back({d, 1.0 - drop - dissipated, drop});
  }
  return out;
}

}  // namespace ringrc
