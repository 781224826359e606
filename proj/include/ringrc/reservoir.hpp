// Drives the ring with per-node power levels and collects virtual-node
// responses: each node's drop field is averaged over its K solver steps and
// photodetected (squared magnitude).
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ringrc/common.hpp"
#include "ringrc/dynamics.hpp"
#include "ringrc/params.hpp"

namespace ringrc {

struct reservoir_result {
  // one matrix per channel, row-major: rows x nodes
  std::vector<std::vector<double>> features;
  std::size_t rows = 0;
  std::size_t nodes = 0;
  double max_delta_n = 0.0;
  double max_delta_t = 0.0;
};

// Integrates `symbols` symbols of per-node drive levels (watts, one level per
// symbol x node, each held for K solver steps) and returns per-channel state
// matrices with the first `warmup_symbols` rows discarded. The caller's state
// is advanced in place, so a run can be split or started off-equilibrium.
inline reservoir_result run_reservoir(const tcmt_model& model, const readout_config& readout,
                                      const std::vector<std::vector<double>>& levels,
                                      std::size_t symbols, std::size_t warmup_symbols,
                                      reservoir_state& state) {
  readout.validate();
  const std::size_t m = model.channel_count();
  const std::size_t nodes = readout.virtual_nodes;
  const std::size_t k = readout.steps_per_node();
  if (std::abs(readout.step_s - model.step_s()) > 1e-18)
    throw config_error("readout solver step does not match the model step");
  if (levels.size() != m)
    throw config_error("drive stream count does not match the channel count");
  const std::size_t total_nodes = symbols * nodes;
  for (const auto& lv : levels)
    if (lv.size() != total_nodes)
      throw config_error("drive stream length must be symbols * virtual_nodes");
  if (warmup_symbols >= symbols)
    throw config_error("warmup must leave at least one readout symbol");
  if (state.a.size() != m) throw config_error("state channel count does not match the model");

  reservoir_result out;
  out.rows = symbols - warmup_symbols;
  out.nodes = nodes;
  out.features.assign(m, std::vector<double>(out.rows * nodes));

  std::vector<double> e_cur(m), e_next(m);
  std::vector<cplx> acc(m);
  const std::size_t steps = total_nodes * k;
  for (std::size_t step = 0; step < steps; ++step) {
    const std::size_t node = step / k;
    std::size_t node1 = (step + 1) / k;
    if (node1 >= total_nodes) node1 = total_nodes - 1;
    for (std::size_t i = 0; i < m; ++i) {
      e_cur[i] = std::sqrt(levels[i][node]);
      e_next[i] = std::sqrt(levels[i][node1]);
    }
    model.rk4_step(state, [&](int sub) { return sub == 2 ? e_next.data() : e_cur.data(); });
    for (std::size_t i = 0; i < m; ++i)
      acc[i] = acc[i] + model.drop_field(state, i, {e_next[i], 0.0});
    if (state.delta_n > out.max_delta_n) out.max_delta_n = state.delta_n;
    if (state.delta_t > out.max_delta_t) out.max_delta_t = state.delta_t;
    if ((step + 1) % k == 0) {
      const std::size_t sym = node / nodes;
      const std::size_t j = node % nodes;
      if (sym >= warmup_symbols) {
        const double inv_k = 1.0 / static_cast<double>(k);
        for (std::size_t i = 0; i < m; ++i)
          out.features[i][(sym - warmup_symbols) * nodes + j] = norm2(inv_k * acc[i]);
      }
      for (auto& v : acc) v = {0.0, 0.0};
    }
  }
  return out;
}

inline reservoir_result run_reservoir(const tcmt_model& model, const readout_config& readout,
                                      const std::vector<std::vector<double>>& levels,
                                      std::size_t symbols, std::size_t warmup_symbols) {
  reservoir_state state = model.make_state();
  return run_reservoir(model, readout, levels, symbols, warmup_symbols, state);
}

}  // namespace ringrc
