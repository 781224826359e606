// One full experiment: generate task data per channel, mask and scale it,
// drive the ring, train readouts, and score the ten test subsets.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ringrc/common.hpp"
#include "ringrc/dynamics.hpp"
#include "ringrc/masking.hpp"
#include "ringrc/metrics.hpp"
#include "ringrc/params.hpp"
#include "ringrc/reservoir.hpp"
#include "ringrc/ridge.hpp"
#include "ringrc/ring.hpp"
#include "ringrc/rng.hpp"
#include "ringrc/tasks.hpp"

namespace ringrc {

struct channel_spec {
  std::string task = "narma10";
  double power_dbm = 0.0;
  double detuning_ghz = 0.0;
  // carrier resonance relative to the reference pump resonance, in FSRs
  int resonance_offset_fsr = 0;
  // a dark channel is integrated with zero drive and gets no readout
  bool dark = false;
};

struct run_lengths {
  std::size_t warmup_symbols = 504;
  std::size_t train_symbols = 10000;
  std::size_t test_symbols = 100000;

  std::size_t total() const { return warmup_symbols + train_symbols + test_symbols; }

  void validate() const {
    if (warmup_symbols < 10)
      throw config_error("run.warmup_symbols must be at least 10 (task edge exclusion)");
    if (train_symbols == 0) throw config_error("run.train_symbols must be > 0");
    if (test_symbols < 10) throw config_error("run.test_symbols must allow 10 subsets");
  }
};

struct experiment_config {
  physical_params physical;
  model_flags flags;
  readout_config readout;
  std::vector<channel_spec> channels;
  run_lengths lengths;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double snr_db = 32.0;
  bool keep_features = false;

  void validate() const {
    physical.validate();
    readout.validate();
    lengths.validate();
    if (channels.empty()) throw config_error("at least one channel is required");
    if (seeds.empty()) throw config_error("at least one seed is required");
    for (const auto& ch : channels) {
      if (ch.dark) continue;
      double lo, hi;
      mask_interval(ch.task, lo, hi);  // rejects unknown task ids
      (void)lo;
      (void)hi;
    }
  }
};

inline channel_config to_channel_config(const experiment_config& cfg, std::size_t index) {
  const channel_spec& sp = cfg.channels[index];
  double fsr_hz = free_spectral_range_hz(cfg.physical, cfg.physical.si_refractive_index);
  channel_config ch;
  ch.index = static_cast<int>(index);
  ch.resonance_freq_rad_s =
      cfg.physical.pump_frequency_rad_s + sp.resonance_offset_fsr * two_pi * fsr_hz;
  ch.carrier_detuning_rad_s = two_pi * sp.detuning_ghz * 1e9;
  ch.avg_power_w = dbm_to_watt(sp.power_dbm);
  ch.task_id = sp.task;
  return ch;
}

struct channel_result {
  std::string task;
  bool active = false;
  metric_report report;
  double train_metric = 0.0;
  readout_weights weights;
  std::vector<double> features;  // populated only when keep_features is set
};

struct experiment_result {
  std::vector<channel_result> channels;
  std::size_t rows = 0;
  std::size_t nodes = 0;
  double max_delta_n = 0.0;
  double max_delta_t = 0.0;
};

// Generation length per task: classification streams are whole 12-sample
// periods, equalization needs 2 lookahead symbols past the run.
inline std::size_t generation_length(const std::string& task, std::size_t symbols) {
  if (task == "classification") return ((symbols + 11) / 12) * 12;
  if (task == "equalization") return symbols + 2;
  return symbols;
}

// Retries generation with a rederived stream seed when the generator reports
// a diverged sequence (the narma10 recurrence blows up for some inputs).
// Bounded so a generator that fails for structural reasons still surfaces
// its error; the rederivation is deterministic, so a given starting seed
// always maps to the same final dataset.
inline task_dataset generate_task_with_retry(const std::string& task, std::size_t length,
                                             std::uint64_t seed, double snr_db) {
  constexpr int max_attempts = 32;
  std::uint64_t s = seed;
  for (int attempt = 0;; ++attempt) {
    try {
      return generate_task(task, length, s, snr_db);
    } catch (const generation_failed&) {
      if (attempt + 1 >= max_attempts) throw;
      s = derive_seed(s, static_cast<std::uint64_t>(attempt));
    }
  }
}

inline experiment_result run_experiment(const experiment_config& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t m = cfg.channels.size();
  const std::size_t nodes = static_cast<std::size_t>(cfg.readout.virtual_nodes);
  const std::size_t symbols = cfg.lengths.total();

  std::vector<task_dataset> data(m);
  std::vector<std::vector<double>> levels(m);
  std::vector<channel_config> channel_cfgs(m);
  for (std::size_t i = 0; i < m; ++i) {
    channel_cfgs[i] = to_channel_config(cfg, i);
    channel_cfgs[i].validate();
    if (cfg.channels[i].dark) {
      levels[i].assign(symbols * nodes, 0.0);
      continue;
    }
    const std::string& task = cfg.channels[i].task;
    task_dataset ds = generate_task_with_retry(task, generation_length(task, symbols),
                                               derive_seed(seed, 2 * i), cfg.snr_db);
    ds.u.resize(symbols);
    ds.y.resize(symbols);
    if (ds.head_exclude > cfg.lengths.warmup_symbols)
      throw config_error("warmup shorter than the task's excluded head");
    std::vector<double> mask = build_mask(task, nodes, derive_seed(seed, 2 * i + 1));
    levels[i] = masked_power_levels(ds.u, mask, cfg.readout.bias, channel_cfgs[i].avg_power_w);
    data[i] = std::move(ds);
  }

  tcmt_model model(cfg.physical, channel_cfgs, cfg.flags, cfg.readout.step_s);
  reservoir_result res =
      run_reservoir(model, cfg.readout, levels, symbols, cfg.lengths.warmup_symbols);

  experiment_result out;
  out.rows = res.rows;
  out.nodes = res.nodes;
  out.max_delta_n = res.max_delta_n;
  out.max_delta_t = res.max_delta_t;
  out.channels.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    channel_result& cr = out.channels[i];
    cr.task = cfg.channels[i].task;
    if (cfg.channels[i].dark) continue;
    std::vector<double> y(data[i].y.begin() + static_cast<std::ptrdiff_t>(cfg.lengths.warmup_symbols),
                          data[i].y.begin() +
                              static_cast<std::ptrdiff_t>(cfg.lengths.warmup_symbols + res.rows));
    dmatrix x = with_bias_column(res.features[i], res.rows, res.nodes);
    trained_readout tr =
        train_and_evaluate(x, y, cfg.lengths.train_symbols, cfg.readout.regularization,
                           data[i].metric);
    cr.active = true;
    cr.report = std::move(tr.report);
    cr.train_metric = tr.train_metric;
    cr.weights = std::move(tr.weights);
    cr.weights.task_id = cr.task;
    if (cfg.keep_features) cr.features = std::move(res.features[i]);
  }
  return out;
}

}  // namespace ringrc
