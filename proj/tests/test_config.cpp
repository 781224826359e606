// Config file tests: default values, lossless round trips, strict key and
// type checking, and the shipped example configs.
#include <catch2/catch_amalgamated.hpp>

#include <cstddef>
#include <string>
#include <vector>

#include "ringrc/common.hpp"
#include "ringrc/config.hpp"
#include "support.hpp"

using namespace ringrc;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

void require_equal_physical(const physical_params& a, const physical_params& b) {
  REQUIRE(a.mass_kg == b.mass_kg);
  REQUIRE(a.tpa_coeff_m_per_w == b.tpa_coeff_m_per_w);
  REQUIRE(a.coupling_lifetime_s == b.coupling_lifetime_s);
  REQUIRE(a.fca_confinement == b.fca_confinement);
  REQUIRE(a.si_refractive_index == b.si_refractive_index);
  REQUIRE(a.thermal_confinement == b.thermal_confinement);
  REQUIRE(a.ref_wavelength_m == b.ref_wavelength_m);
  REQUIRE(a.ring_circumference_m == b.ring_circumference_m);
  REQUIRE(a.thermo_optic_coeff_per_k == b.thermo_optic_coeff_per_k);
  REQUIRE(a.fcd_coeff_m3 == b.fcd_coeff_m3);
  REQUIRE(a.specific_heat_j_per_gk == b.specific_heat_j_per_gk);
  REQUIRE(a.fca_cross_section_m2 == b.fca_cross_section_m2);
  REQUIRE(a.fca_volume_m3 == b.fca_volume_m3);
  REQUIRE(a.tpa_volume_m3 == b.tpa_volume_m3);
  REQUIRE(a.thermal_lifetime_s == b.thermal_lifetime_s);
  REQUIRE(a.carrier_lifetime_s == b.carrier_lifetime_s);
  REQUIRE(a.attenuation_per_m == b.attenuation_per_m);
  REQUIRE(a.feedback_coupling == b.feedback_coupling);
  REQUIRE(a.external_phase_rad == b.external_phase_rad);
  REQUIRE(a.feedback_delay_s == b.feedback_delay_s);
  REQUIRE(a.pump_frequency_rad_s == b.pump_frequency_rad_s);
}

}  // namespace

TEST_CASE("empty config document yields the built-in defaults", "[cli]") {
  run_config rc = config_from_json(json::object());
  const experiment_config& cfg = rc.experiment;

  REQUIRE(cfg.physical.mass_kg == 1.2e-11);
  REQUIRE(cfg.physical.coupling_lifetime_s == 54.7e-12);
  REQUIRE(cfg.physical.si_refractive_index == 3.485);
  REQUIRE(cfg.physical.ref_wavelength_m == 1553.49e-9);
  REQUIRE(cfg.physical.feedback_coupling == 0.95);
  REQUIRE(cfg.physical.external_phase_rad == 0.15);
  REQUIRE(cfg.physical.feedback_delay_s == 0.5e-9);
  REQUIRE(cfg.physical.thermal_lifetime_s == 50e-9);
  REQUIRE(cfg.physical.carrier_lifetime_s == 10e-9);
  REQUIRE(cfg.physical.pump_frequency_rad_s == two_pi * speed_of_light_m_s / 1553.49e-9);

  REQUIRE_FALSE(cfg.flags.eq3_literal);
  REQUIRE_FALSE(cfg.flags.eq4_literal);
  REQUIRE_FALSE(cfg.flags.eq12_literal);

  REQUIRE(cfg.readout.virtual_nodes == 50);
  REQUIRE(cfg.readout.symbol_rate_baud == 1e9);
  REQUIRE(cfg.readout.step_s == 2e-12);
  REQUIRE(cfg.readout.bias == 1.0);
  REQUIRE(cfg.readout.regularization == 0.5e-10);

  REQUIRE(cfg.lengths.warmup_symbols == 504);
  REQUIRE(cfg.lengths.train_symbols == 10000);
  REQUIRE(cfg.lengths.test_symbols == 100000);
  REQUIRE(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  REQUIRE(cfg.snr_db == 32.0);
  REQUIRE(cfg.channels.empty());
  REQUIRE(rc.output_dir == ".");
}

TEST_CASE("config survives a json round trip unchanged", "[cli]") {
  run_config rc;
  rc.output_dir = "/tmp/somewhere";
  rc.experiment.physical.mass_kg = 3.25e-11;
  rc.experiment.physical.attenuation_per_m = 19.75;
  rc.experiment.flags.eq4_literal = true;
  rc.experiment.readout.virtual_nodes = 17;
  rc.experiment.readout.bias = 2.5;
  rc.experiment.lengths.train_symbols = 1234;
  rc.experiment.seeds = {42, 43};
  rc.experiment.snr_db = 12.5;
  channel_spec a;
  a.task = "equalization";
  a.power_dbm = 15.0;
  a.detuning_ghz = -20.0;
  a.resonance_offset_fsr = 1;
  channel_spec b;
  b.task = "classification";
  b.power_dbm = -10.25;
  b.detuning_ghz = -45.5;
  b.resonance_offset_fsr = -2;
  rc.experiment.channels = {a, b};

  run_config back = config_from_json(config_to_json(rc));
  require_equal_physical(back.experiment.physical, rc.experiment.physical);
  REQUIRE(back.experiment.flags.eq3_literal == rc.experiment.flags.eq3_literal);
  REQUIRE(back.experiment.flags.eq4_literal == rc.experiment.flags.eq4_literal);
  REQUIRE(back.experiment.flags.eq12_literal == rc.experiment.flags.eq12_literal);
  REQUIRE(back.experiment.readout.virtual_nodes == 17);
  REQUIRE(back.experiment.readout.bias == 2.5);
  REQUIRE(back.experiment.lengths.warmup_symbols == rc.experiment.lengths.warmup_symbols);
  REQUIRE(back.experiment.lengths.train_symbols == 1234);
  REQUIRE(back.experiment.lengths.test_symbols == rc.experiment.lengths.test_symbols);
  REQUIRE(back.experiment.seeds == rc.experiment.seeds);
  REQUIRE(back.experiment.snr_db == 12.5);
  REQUIRE(back.output_dir == "/tmp/somewhere");
  REQUIRE(back.experiment.channels.size() == 2);
  REQUIRE(back.experiment.channels[0].task == "equalization");
  REQUIRE(back.experiment.channels[0].power_dbm == 15.0);
  REQUIRE(back.experiment.channels[0].detuning_ghz == -20.0);
  REQUIRE(back.experiment.channels[0].resonance_offset_fsr == 1);
  REQUIRE(back.experiment.channels[1].task == "classification");
  REQUIRE(back.experiment.channels[1].power_dbm == -10.25);
  REQUIRE(back.experiment.channels[1].detuning_ghz == -45.5);
  REQUIRE(back.experiment.channels[1].resonance_offset_fsr == -2);
}

TEST_CASE("unknown keys are rejected at every section level", "[cli]") {
  SECTION("top level") {
    REQUIRE_THROWS_MATCHES(config_from_json(json::parse(R"({"physics": {}})")), config_error,
                           MessageMatches(ContainsSubstring("unknown key 'physics' in config")));
  }
  SECTION("physical") {
    REQUIRE_THROWS_MATCHES(config_from_json(json::parse(R"({"physical": {"mass": 1.0}})")),
                           config_error,
                           MessageMatches(ContainsSubstring("unknown key 'mass' in physical")));
  }
  SECTION("flags") {
    REQUIRE_THROWS_MATCHES(
        config_from_json(json::parse(R"({"flags": {"eq5_literal": true}})")), config_error,
        MessageMatches(ContainsSubstring("unknown key 'eq5_literal' in flags")));
  }
  SECTION("readout") {
    REQUIRE_THROWS_MATCHES(config_from_json(json::parse(R"({"readout": {"nodes": 50}})")),
                           config_error,
                           MessageMatches(ContainsSubstring("unknown key 'nodes' in readout")));
  }
  SECTION("run") {
    REQUIRE_THROWS_MATCHES(config_from_json(json::parse(R"({"run": {"symbols": 100}})")),
                           config_error,
                           MessageMatches(ContainsSubstring("unknown key 'symbols' in run")));
  }
  SECTION("channel entries name their index") {
    json j = json::parse(
        R"({"channels": [{"task": "narma10"}, {"task": "narma10", "power": 1.0}]})");
    REQUIRE_THROWS_MATCHES(
        config_from_json(j), config_error,
        MessageMatches(ContainsSubstring("unknown key 'power' in channels[1]")));
  }
  SECTION("plan") {
    REQUIRE_THROWS_MATCHES(plan_from_json(json::parse(R"({"mode": "locked", "powers": []})")),
                           config_error,
                           MessageMatches(ContainsSubstring("unknown key 'powers' in plan")));
  }
}

TEST_CASE("wrong field types are reported with section and key", "[cli]") {
  REQUIRE_THROWS_MATCHES(
      config_from_json(json::parse(R"({"physical": {"mass_kg": "heavy"}})")), config_error,
      MessageMatches(ContainsSubstring("field physical.mass_kg has the wrong type")));
  REQUIRE_THROWS_MATCHES(
      config_from_json(json::parse(R"({"run": {"seeds": 3}})")), config_error,
      MessageMatches(ContainsSubstring("field run.seeds has the wrong type")));
  REQUIRE_THROWS_MATCHES(
      config_from_json(json::parse(R"({"readout": {"virtual_nodes": "many"}})")), config_error,
      MessageMatches(ContainsSubstring("field readout.virtual_nodes has the wrong type")));
  REQUIRE_THROWS_MATCHES(
      plan_from_json(json::parse(R"({"power_dbm": "loud"})")), config_error,
      MessageMatches(ContainsSubstring("field plan.power_dbm has the wrong type")));
}

TEST_CASE("channels must be an array", "[cli]") {
  REQUIRE_THROWS_MATCHES(config_from_json(json::parse(R"({"channels": {"task": "narma10"}})")),
                         config_error, MessageMatches(ContainsSubstring("channels must be an array")));
}

TEST_CASE("sweep plan survives a json round trip", "[cli]") {
  SECTION("locked") {
    sweep_plan plan;
    plan.power_dbm = {-20.0, -10.0, 0.0};
    plan.detuning_ghz = {-60.0, -20.0};
    plan.seeds = {7, 8};
    sweep_plan back = plan_from_json(plan_to_json(plan));
    REQUIRE(back.mode == "locked");
    REQUIRE(back.power_dbm == plan.power_dbm);
    REQUIRE(back.detuning_ghz == plan.detuning_ghz);
    REQUIRE(back.seeds == plan.seeds);
  }
  SECTION("per channel") {
    sweep_plan plan;
    plan.mode = "per_channel";
    plan.channel_powers_dbm = {{0.0, -10.0}, {5.0, -5.0}};
    plan.channel_detunings_ghz = {{-60.0, -45.0}, {-20.0, 0.0}};
    plan.seeds = {1};
    sweep_plan back = plan_from_json(plan_to_json(plan));
    REQUIRE(back.mode == "per_channel");
    REQUIRE(back.channel_powers_dbm == plan.channel_powers_dbm);
    REQUIRE(back.channel_detunings_ghz == plan.channel_detunings_ghz);
    REQUIRE(back.seeds == plan.seeds);
  }
}

TEST_CASE("missing and malformed config files carry the path", "[cli]") {
  REQUIRE_THROWS_MATCHES(
      load_json_file("/tmp/ringrc_missing_config.json"), io_error,
      MessageMatches(ContainsSubstring("cannot open config file '/tmp/ringrc_missing_config.json'")));
  const std::string path = "/tmp/ringrc_bad_config.json";
  testsupport::write_file(path, "{not json");
  REQUIRE_THROWS_MATCHES(load_json_file(path), config_error,
                         MessageMatches(ContainsSubstring("is not valid JSON")));
}

TEST_CASE("shipped example configs parse and validate", "[cli]") {
  SECTION("default run config") {
    run_config rc = load_run_config(testsupport::config_dir() + "/default.json");
    REQUIRE_NOTHROW(rc.experiment.validate());
    REQUIRE(rc.experiment.channels.size() == 3);
    REQUIRE(rc.experiment.channels[0].task == "narma10");
    REQUIRE(rc.experiment.channels[1].task == "classification");
    REQUIRE(rc.experiment.channels[2].task == "equalization");
    REQUIRE(rc.experiment.channels[0].resonance_offset_fsr == -1);
    REQUIRE(rc.experiment.channels[2].resonance_offset_fsr == 1);
    REQUIRE(rc.experiment.lengths.train_symbols == 10000);
    REQUIRE(rc.experiment.lengths.test_symbols == 100000);
    REQUIRE(rc.experiment.seeds.size() == 10);
  }
  SECTION("reduced sweep run config") {
    run_config rc = load_run_config(testsupport::config_dir() + "/sweep_point.json");
    REQUIRE_NOTHROW(rc.experiment.validate());
    REQUIRE(rc.experiment.lengths.train_symbols == 2400);
    REQUIRE(rc.experiment.lengths.test_symbols == 1200);
    REQUIRE(rc.experiment.seeds.size() == 3);
  }
  SECTION("coarse sweep plan") {
    sweep_plan plan = load_sweep_plan(testsupport::config_dir() + "/sweep_coarse.json");
    REQUIRE_NOTHROW(plan.validate(3));
    REQUIRE(plan.mode == "locked");
    REQUIRE(plan.power_dbm.size() == 10);
    REQUIRE(plan.detuning_ghz.size() == 11);
    REQUIRE(plan.power_dbm.front() == -20.0);
    REQUIRE(plan.power_dbm.back() == 25.0);
    REQUIRE(plan.detuning_ghz.front() == -100.0);
    REQUIRE(plan.detuning_ghz.back() == 100.0);
    REQUIRE(plan.seeds == std::vector<std::uint64_t>{1, 2, 3});
  }
  SECTION("dense sweep plan") {
    sweep_plan plan = load_sweep_plan(testsupport::config_dir() + "/sweep_default.json");
    REQUIRE_NOTHROW(plan.validate(3));
    REQUIRE(plan.power_dbm.size() == 19);
    REQUIRE(plan.detuning_ghz.size() == 41);
    REQUIRE(plan.seeds.size() == 10);
  }
}
