// Device and run parameter types with validation and derived rates.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ringrc/common.hpp"

namespace ringrc {

// Physical constants of the add-drop silicon microring plus the external
// feedback waveguide. Defaults are the reference device.
struct physical_params {
  double mass_kg = 1.2e-11;
  double tpa_coeff_m_per_w = 8.4e-11;
  double coupling_lifetime_s = 54.7e-12;
  double fca_confinement = 0.9996;
  double si_refractive_index = 3.485;
  double thermal_confinement = 0.9355;
  double ref_wavelength_m = 1553.49e-9;
  double ring_circumference_m = two_pi * 7.5e-6;
  double thermo_optic_coeff_per_k = 1.86e-4;
  double fcd_coeff_m3 = -1.73e-27;
  double specific_heat_j_per_gk = 0.7;
  double fca_cross_section_m2 = 1.0e-21;
  double fca_volume_m3 = 2.36e-18;
  double tpa_volume_m3 = 2.59e-18;
  double thermal_lifetime_s = 50e-9;
  double carrier_lifetime_s = 10e-9;
  double attenuation_per_m = db_per_cm_to_per_m(0.8);
  double feedback_coupling = 0.95;
  double external_phase_rad = 0.15;
  double feedback_delay_s = 0.5e-9;
  double pump_frequency_rad_s = two_pi * speed_of_light_m_s / 1553.49e-9;

  double coupling_rate() const { return std::sqrt(2.0 / coupling_lifetime_s); }
  double intrinsic_loss_rate() const {
    return speed_of_light_m_s * attenuation_per_m / si_refractive_index;
  }
  double linear_loss_rate() const {
    return intrinsic_loss_rate() + 2.0 / coupling_lifetime_s;
  }
  double loop_phase_rad() const {
    return pump_frequency_rad_s * feedback_delay_s + external_phase_rad;
  }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw config_error(std::string("physical.") + name + " must be > 0");
    };
    positive(mass_kg, "mass_kg");
    positive(coupling_lifetime_s, "coupling_lifetime_s");
    positive(si_refractive_index, "si_refractive_index");
    positive(ref_wavelength_m, "ref_wavelength_m");
    positive(ring_circumference_m, "ring_circumference_m");
    positive(specific_heat_j_per_gk, "specific_heat_j_per_gk");
    positive(fca_volume_m3, "fca_volume_m3");
    positive(tpa_volume_m3, "tpa_volume_m3");
    positive(thermal_lifetime_s, "thermal_lifetime_s");
    positive(carrier_lifetime_s, "carrier_lifetime_s");
    positive(feedback_delay_s, "feedback_delay_s");
    positive(pump_frequency_rad_s, "pump_frequency_rad_s");
    if (!(attenuation_per_m >= 0.0))
      throw config_error("physical.attenuation_per_m must be >= 0");
    if (!(feedback_coupling >= 0.0 && feedback_coupling <= 1.0))
      throw config_error("physical.feedback_coupling must be in [0, 1]");
    if (!(fca_confinement >= 0.0 && fca_confinement <= 1.0))
      throw config_error("physical.fca_confinement must be in [0, 1]");
    if (!(thermal_confinement >= 0.0 && thermal_confinement <= 1.0))
      throw config_error("physical.thermal_confinement must be in [0, 1]");
  }
};

// Model-text interpretation switches. The defaults are the dimensionally
// consistent forms; the literal flags reproduce the source text of the
// corresponding field/heat equations verbatim.
struct model_flags {
  bool eq3_literal = false;   // feedback re-injection coefficient 1/tau_c instead of kappa_c
  bool eq4_literal = false;   // drop field (1/tau_c)*a*E_in + E_add instead of kappa_c*a + E_add
  bool eq12_literal = false;  // heat source P_abs*|a|^2 instead of P_abs

  bool operator==(const model_flags&) const = default;
};

struct channel_config {
  int index = 0;
  double resonance_freq_rad_s = 0.0;
  double carrier_detuning_rad_s = 0.0;  // carrier minus resonance
  double avg_power_w = 1e-3;
  std::string task_id;

  void validate() const {
    if (!(avg_power_w > 0.0))
      throw config_error("channel " + std::to_string(index) + ": avg_power_w must be > 0");
    if (!(resonance_freq_rad_s > 0.0))
      throw config_error("channel " + std::to_string(index) +
                         ": resonance_freq_rad_s must be > 0");
  }
};

// Virtual-node timing and readout settings. The node duration is
// 1/(symbol_rate * virtual_nodes); it must be an integer number of solver
// steps, and the feedback delay an integer number of steps as well.
struct readout_config {
  int virtual_nodes = 50;
  double symbol_rate_baud = 1e9;
  double step_s = 2e-12;
  double bias = 1.0;
  double regularization = 0.5e-10;

  double node_duration_s() const { return 1.0 / (symbol_rate_baud * virtual_nodes); }

  int steps_per_node() const {
    double k = node_duration_s() / step_s;
    return static_cast<int>(std::lround(k));
  }

  void validate() const {
    if (virtual_nodes <= 0) throw config_error("readout.virtual_nodes must be > 0");
    if (!(symbol_rate_baud > 0.0)) throw config_error("readout.symbol_rate_baud must be > 0");
    if (!(step_s > 0.0)) throw config_error("readout.step_s must be > 0");
    if (!(regularization >= 0.0)) throw config_error("readout.regularization must be >= 0");
    double k = node_duration_s() / step_s;
    if (std::abs(k - std::lround(k)) > 1e-9 * k || std::lround(k) < 1)
      throw config_error("readout: node duration " + std::to_string(node_duration_s()) +
                         " s is not an integer multiple of the solver step");
  }
};

}  // namespace ringrc
