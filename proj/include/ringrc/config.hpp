// Structured config file handling: strict parsing (unknown keys rejected,
// field-level messages) and lossless serialization for round-tripping.
#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ringrc/common.hpp"
#include "ringrc/experiment.hpp"
#include "ringrc/sweep.hpp"

namespace ringrc {

using json = nlohmann::json;

inline void reject_unknown_keys(const json& j, const std::string& section,
                                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known)
      throw config_error("unknown key '" + item.key() + "' in " + section);
  }
}

template <class T>
inline void read_field(const json& j, const std::string& section, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error("field " + section + "." + key + " has the wrong type");
  }
}

inline void physical_from_json(const json& j, physical_params& p) {
  reject_unknown_keys(
      j, "physical",
      {"mass_kg", "tpa_coeff_m_per_w", "coupling_lifetime_s", "fca_confinement",
       "si_refractive_index", "thermal_confinement", "ref_wavelength_m", "ring_circumference_m",
       "thermo_optic_coeff_per_k", "fcd_coeff_m3", "specific_heat_j_per_gk",
       "fca_cross_section_m2", "fca_volume_m3", "tpa_volume_m3", "thermal_lifetime_s",
       "carrier_lifetime_s", "attenuation_per_m", "feedback_coupling", "external_phase_rad",
       "feedback_delay_s", "pump_frequency_rad_s"});
  read_field(j, "physical", "mass_kg", p.mass_kg);
  read_field(j, "physical", "tpa_coeff_m_per_w", p.tpa_coeff_m_per_w);
  read_field(j, "physical", "coupling_lifetime_s", p.coupling_lifetime_s);
  read_field(j, "physical", "fca_confinement", p.fca_confinement);
  read_field(j, "physical", "si_refractive_index", p.si_refractive_index);
  read_field(j, "physical", "thermal_confinement", p.thermal_confinement);
  read_field(j, "physical", "ref_wavelength_m", p.ref_wavelength_m);
  read_field(j, "physical", "ring_circumference_m", p.ring_circumference_m);
  read_field(j, "physical", "thermo_optic_coeff_per_k", p.thermo_optic_coeff_per_k);
  read_field(j, "physical", "fcd_coeff_m3", p.fcd_coeff_m3);
  read_field(j, "physical", "specific_heat_j_per_gk", p.specific_heat_j_per_gk);
  read_field(j, "physical", "fca_cross_section_m2", p.fca_cross_section_m2);
  read_field(j, "physical", "fca_volume_m3", p.fca_volume_m3);
  read_field(j, "physical", "tpa_volume_m3", p.tpa_volume_m3);
  read_field(j, "physical", "thermal_lifetime_s", p.thermal_lifetime_s);
  read_field(j, "physical", "carrier_lifetime_s", p.carrier_lifetime_s);
  read_field(j, "physical", "attenuation_per_m", p.attenuation_per_m);
  read_field(j, "physical", "feedback_coupling", p.feedback_coupling);
  read_field(j, "physical", "external_phase_rad", p.external_phase_rad);
  read_field(j, "physical", "feedback_delay_s", p.feedback_delay_s);
  read_field(j, "physical", "pump_frequency_rad_s", p.pump_frequency_rad_s);
}

inline json physical_to_json(const physical_params& p) {
  json j;
  j["mass_kg"] = p.mass_kg;
  j["tpa_coeff_m_per_w"] = p.tpa_coeff_m_per_w;
  j["coupling_lifetime_s"] = p.coupling_lifetime_s;
  j["fca_confinement"] = p.fca_confinement;
  j["si_refractive_index"] = p.si_refractive_index;
  j["thermal_confinement"] = p.thermal_confinement;
  j["ref_wavelength_m"] = p.ref_wavelength_m;
  j["ring_circumference_m"] = p.ring_circumference_m;
  j["thermo_optic_coeff_per_k"] = p.thermo_optic_coeff_per_k;
  j["fcd_coeff_m3"] = p.fcd_coeff_m3;
  j["specific_heat_j_per_gk"] = p.specific_heat_j_per_gk;
  j["fca_cross_section_m2"] = p.fca_cross_section_m2;
  j["fca_volume_m3"] = p.fca_volume_m3;
  j["tpa_volume_m3"] = p.tpa_volume_m3;
  j["thermal_lifetime_s"] = p.thermal_lifetime_s;
  j["carrier_lifetime_s"] = p.carrier_lifetime_s;
  j["attenuation_per_m"] = p.attenuation_per_m;
  j["feedback_coupling"] = p.feedback_coupling;
  j["external_phase_rad"] = p.external_phase_rad;
  j["feedback_delay_s"] = p.feedback_delay_s;
  j["pump_frequency_rad_s"] = p.pump_frequency_rad_s;
  return j;
}

struct run_config {
  experiment_config experiment;
  std::string output_dir = ".";
};

inline run_config config_from_json(const json& j) {
  reject_unknown_keys(j, "config", {"physical", "flags", "readout", "run", "channels"});
  run_config rc;
  experiment_config& cfg = rc.experiment;

  if (j.contains("physical")) physical_from_json(j.at("physical"), cfg.physical);

  if (j.contains("flags")) {
    const json& f = j.at("flags");
    reject_unknown_keys(f, "flags", {"eq3_literal", "eq4_literal", "eq12_literal"});
    read_field(f, "flags", "eq3_literal", cfg.flags.eq3_literal);
    read_field(f, "flags", "eq4_literal", cfg.flags.eq4_literal);
    read_field(f, "flags", "eq12_literal", cfg.flags.eq12_literal);
  }

  if (j.contains("readout")) {
    const json& r = j.at("readout");
    reject_unknown_keys(
        r, "readout",
        {"virtual_nodes", "symbol_rate_baud", "step_s", "bias", "regularization"});
    read_field(r, "readout", "virtual_nodes", cfg.readout.virtual_nodes);
    read_field(r, "readout", "symbol_rate_baud", cfg.readout.symbol_rate_baud);
    read_field(r, "readout", "step_s", cfg.readout.step_s);
    read_field(r, "readout", "bias", cfg.readout.bias);
    read_field(r, "readout", "regularization", cfg.readout.regularization);
  }

  if (j.contains("run")) {
    const json& r = j.at("run");
    reject_unknown_keys(r, "run",
                        {"warmup_symbols", "train_symbols", "test_symbols", "seeds", "snr_db",
                         "output_dir"});
    read_field(r, "run", "warmup_symbols", cfg.lengths.warmup_symbols);
    read_field(r, "run", "train_symbols", cfg.lengths.train_symbols);
    read_field(r, "run", "test_symbols", cfg.lengths.test_symbols);
    read_field(r, "run", "seeds", cfg.seeds);
    read_field(r, "run", "snr_db", cfg.snr_db);
    read_field(r, "run", "output_dir", rc.output_dir);
  }

  if (j.contains("channels")) {
    if (!j.at("channels").is_array()) throw config_error("channels must be an array");
    cfg.channels.clear();
    std::size_t idx = 0;
    for (const json& c : j.at("channels")) {
      std::string section = "channels[" + std::to_string(idx) + "]";
      reject_unknown_keys(c, section,
                          {"task", "power_dbm", "detuning_ghz", "resonance_offset_fsr"});
      channel_spec sp;
      read_field(c, section, "task", sp.task);
      read_field(c, section, "power_dbm", sp.power_dbm);
      read_field(c, section, "detuning_ghz", sp.detuning_ghz);
      read_field(c, section, "resonance_offset_fsr", sp.resonance_offset_fsr);
      cfg.channels.push_back(sp);
      ++idx;
    }
  }
  return rc;
}

inline json config_to_json(const run_config& rc) {
  const experiment_config& cfg = rc.experiment;
  json j;
  j["physical"] = physical_to_json(cfg.physical);
  j["flags"] = {{"eq3_literal", cfg.flags.eq3_literal},
                {"eq4_literal", cfg.flags.eq4_literal},
                {"eq12_literal", cfg.flags.eq12_literal}};
  j["readout"] = {{"virtual_nodes", cfg.readout.virtual_nodes},
                  {"symbol_rate_baud", cfg.readout.symbol_rate_baud},
                  {"step_s", cfg.readout.step_s},
                  {"bias", cfg.readout.bias},
                  {"regularization", cfg.readout.regularization}};
  j["run"] = {{"warmup_symbols", cfg.lengths.warmup_symbols},
              {"train_symbols", cfg.lengths.train_symbols},
              {"test_symbols", cfg.lengths.test_symbols},
              {"seeds", cfg.seeds},
              {"snr_db", cfg.snr_db},
              {"output_dir", rc.output_dir}};
  json channels = json::array();
  for (const auto& sp : cfg.channels)
    channels.push_back({{"task", sp.task},
                        {"power_dbm", sp.power_dbm},
                        {"detuning_ghz", sp.detuning_ghz},
                        {"resonance_offset_fsr", sp.resonance_offset_fsr}});
  j["channels"] = channels;
  return j;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw config_error("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

inline run_config load_run_config(const std::string& path) {
  return config_from_json(load_json_file(path));
}

inline sweep_plan plan_from_json(const json& j) {
  reject_unknown_keys(j, "plan",
                      {"mode", "power_dbm", "detuning_ghz", "seeds", "channel_powers_dbm",
                       "channel_detunings_ghz"});
  sweep_plan plan;
  read_field(j, "plan", "mode", plan.mode);
  read_field(j, "plan", "power_dbm", plan.power_dbm);
  read_field(j, "plan", "detuning_ghz", plan.detuning_ghz);
  read_field(j, "plan", "seeds", plan.seeds);
  read_field(j, "plan", "channel_powers_dbm", plan.channel_powers_dbm);
  read_field(j, "plan", "channel_detunings_ghz", plan.channel_detunings_ghz);
  return plan;
}

inline json plan_to_json(const sweep_plan& plan) {
  json j;
  j["mode"] = plan.mode;
  j["power_dbm"] = plan.power_dbm;
  j["detuning_ghz"] = plan.detuning_ghz;
  j["seeds"] = plan.seeds;
  j["channel_powers_dbm"] = plan.channel_powers_dbm;
  j["channel_detunings_ghz"] = plan.channel_detunings_ghz;
  return j;
}

inline sweep_plan load_sweep_plan(const std::string& path) {
  return plan_from_json(load_json_file(path));
}

}  // namespace ringrc
