// Input pipeline from task symbols to per-node optical power levels:
// normalization, mask application, bias, and mean-power scaling.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ringrc/common.hpp"
#include "ringrc/rng.hpp"

namespace ringrc {

// Mask entry interval per task.
inline void mask_interval(const std::string& task_id, double& lo, double& hi) {
  if (task_id == "narma10" || task_id == "classification") {
    lo = 0.0;
    hi = 1.0;
  } else if (task_id == "equalization") {
    lo = -1.0;
    hi = 1.0;
  } else {
    throw config_error("unknown task id '" + task_id + "'");
  }
}

// N i.i.d. uniform draws from the task's interval, deterministic in the seed.
inline std::vector<double> build_mask(const std::string& task_id, std::size_t node_count,
                                      std::uint64_t seed) {
  if (node_count < 1) throw config_error("mask needs at least one node");
  double lo = 0.0, hi = 1.0;
  mask_interval(task_id, lo, hi);
  rng r(seed);
  std::vector<double> m(node_count);
  for (auto& v : m) v = r.uniform(lo, hi);
  return m;
}

// u scaled so max|u| = 1; an all-zero sequence passes through unchanged.
inline std::vector<double> normalize_max_abs(const std::vector<double>& u) {
  double peak = 0.0;
  for (double v : u) peak = std::max(peak, std::abs(v));
  std::vector<double> out(u.size());
  if (peak == 0.0) return out;
  for (std::size_t n = 0; n < u.size(); ++n) out[n] = u[n] / peak;
  return out;
}

// Per-node power levels, row-major (symbol, node): level(n,j) = u(n)*m(j) + bias.
// Any negative level is a configuration error, not something to clip away.
inline std::vector<double> mask_levels(const std::vector<double>& u,
                                       const std::vector<double>& mask, double bias) {
  const std::size_t nodes = mask.size();
  std::vector<double> levels(u.size() * nodes);
  for (std::size_t n = 0; n < u.size(); ++n) {
    for (std::size_t j = 0; j < nodes; ++j) {
      double lv = u[n] * mask[j] + bias;
      if (lv < 0.0)
        throw config_error("negative drive power at symbol " + std::to_string(n) + ", node " +
                           std::to_string(j) + " (level " + std::to_string(lv) +
                           "); increase the bias");
      levels[n * nodes + j] = lv;
    }
  }
  return levels;
}

// Scales levels in place so their time average equals avg_power_w.
inline void scale_mean_power(std::vector<double>& levels, double avg_power_w) {
  if (levels.empty()) throw config_error("cannot power-scale an empty stream");
  if (!(avg_power_w > 0.0)) throw config_error("average power must be > 0");
  double sum = 0.0;
  for (double v : levels) sum += v;
  double mean = sum / static_cast<double>(levels.size());
  if (mean == 0.0) throw config_error("all-zero drive stream cannot be scaled to a target power");
  double s = avg_power_w / mean;
  for (auto& v : levels) v *= s;
}

// Full pipeline for one channel: normalize, mask, bias, scale. The result has
// one power level per (symbol, node) pair; each level is held for K solver
// steps by the reservoir driver.
inline std::vector<double> masked_power_levels(const std::vector<double>& u,
                                               const std::vector<double>& mask, double bias,
                                               double avg_power_w) {
  std::vector<double> levels = mask_levels(normalize_max_abs(u), mask, bias);
  scale_mean_power(levels, avg_power_w);
  return levels;
}

}  // namespace ringrc
