// Benchmark task generators: NARMA-10 prediction, sine/square waveform
// classification, and nonlinear wireless channel equalization.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ringrc/common.hpp"
#include "ringrc/masking.hpp"
#include "ringrc/rng.hpp"

namespace ringrc {

struct task_dataset {
  std::string task_id;
  std::vector<double> u;  // reservoir-facing input (any task bias rule applied)
  std::vector<double> y;  // target aligned to u
  std::string metric;     // "nmse" | "accuracy" | "ser"
  double mask_lo = 0.0;
  double mask_hi = 1.0;
  std::uint64_t seed = 0;
  // symbols at the ends that must not serve as training or scoring targets
  std::size_t head_exclude = 0;
  std::size_t tail_exclude = 0;
};

// NARMA-10: u ~ U[0, 0.5]; y(n+1) = 0.3 y(n) + 0.05 y(n) sum_{i=0..9} y(n-i)
// + 1.5 u(n-9) u(n) + 0.1 with zero-padded u and y. Target for symbol n is
// the one-step-ahead value y(n+1). The recurrence is unstable for unlucky
// input sequences; once |y| passes narma10_divergence_bound it grows without
// recovery, so generation aborts there and the caller retries with a new seed.
inline constexpr double narma10_divergence_bound = 1e3;

inline task_dataset gen_narma10(std::size_t length, std::uint64_t seed) {
  if (length == 0) throw config_error("narma10 length must be > 0");
  task_dataset d;
  d.task_id = "narma10";
  d.metric = "nmse";
  d.seed = seed;
  mask_interval(d.task_id, d.mask_lo, d.mask_hi);
  rng r(seed);
  d.u.resize(length);
  for (auto& v : d.u) v = r.uniform(0.0, 0.5);
  std::vector<double> y(length + 1, 0.0);
  for (std::size_t n = 0; n < length; ++n) {
    double window = 0.0;
    for (std::size_t i = (n >= 9 ? n - 9 : 0); i <= n; ++i) window += y[i];
    double uprod = (n >= 9) ? d.u[n - 9] * d.u[n] : 0.0;
    y[n + 1] = 0.3 * y[n] + 0.05 * y[n] * window + 1.5 * uprod + 0.1;
    if (!(std::fabs(y[n + 1]) < narma10_divergence_bound))
      throw generation_failed("narma10 recurrence diverged at symbol " +
                              std::to_string(n) + "; retry with a new seed");
  }
  d.y.assign(y.begin() + 1, y.end());
  return d;
}

// Sine/square classification: random sequence of full 12-sample periods,
// sine(k) = sin(2*pi*k/12) labeled 0, square = +1/-1 half-periods labeled 1.
// Every sample carries its period's label.
inline task_dataset gen_classification(std::size_t length, std::uint64_t seed) {
  if (length == 0 || length % 12 != 0)
    throw config_error("classification length must be a positive multiple of 12");
  task_dataset d;
  d.task_id = "classification";
  d.metric = "accuracy";
  d.seed = seed;
  mask_interval(d.task_id, d.mask_lo, d.mask_hi);
  rng r(seed);
  d.u.resize(length);
  d.y.resize(length);
  for (std::size_t p = 0; p < length / 12; ++p) {
    bool square = r.integer(2) == 1;
    for (std::size_t k = 0; k < 12; ++k) {
      d.u[p * 12 + k] = square ? (k < 6 ? 1.0 : -1.0)
                               : std::sin(two_pi * static_cast<double>(k) / 12.0);
      d.y[p * 12 + k] = square ? 1.0 : 0.0;
    }
  }
  return d;
}

// Wireless channel equalization: PAM-4 symbols d(n) pass a 10-tap linear
// channel with 2-symbol lookahead, then a cubic memoryless distortion plus
// AWGN at snr_db relative to the noiseless distorted power. The reservoir
// sees u(n) + 30; the target is d(n-2). The first 10 and last 2 symbols are
// excluded from targets to avoid the zero-padded edges.
inline task_dataset gen_equalization(std::size_t length, std::uint64_t seed,
                                     double snr_db = 32.0) {
  if (length < 13) throw config_error("equalization length must be at least 13");
  if (!std::isfinite(snr_db)) throw config_error("equalization snr_db must be finite");
  task_dataset d;
  d.task_id = "equalization";
  d.metric = "ser";
  d.seed = seed;
  d.head_exclude = 10;
  d.tail_exclude = 2;
  mask_interval(d.task_id, d.mask_lo, d.mask_hi);
  rng r(seed);
  static constexpr double alphabet[4] = {-3.0, -1.0, 1.0, 3.0};
  std::vector<double> sym(length);
  for (auto& v : sym) v = alphabet[r.integer(4)];
  static constexpr struct {
    int offset;
    double gain;
  } taps[] = {{2, 0.08}, {1, -0.12}, {0, 1.0},   {-1, 0.18}, {-2, -0.1},
              {-3, 0.091}, {-4, -0.05}, {-5, 0.04}, {-6, 0.03}, {-7, 0.01}};
  std::vector<double> s(length);
  double noiseless_power = 0.0;
  for (std::size_t n = 0; n < length; ++n) {
    double q = 0.0;
    for (const auto& t : taps) {
      long long k = static_cast<long long>(n) + t.offset;
      if (k >= 0 && k < static_cast<long long>(length)) q += t.gain * sym[k];
    }
    s[n] = q + 0.036 * q * q - 0.011 * q * q * q;
    noiseless_power += s[n] * s[n];
  }
  noiseless_power /= static_cast<double>(length);
  double noise_sigma = std::sqrt(noiseless_power / std::pow(10.0, snr_db / 10.0));
  d.u.resize(length);
  d.y.assign(length, 0.0);
  for (std::size_t n = 0; n < length; ++n) {
    d.u[n] = s[n] + r.normal(0.0, noise_sigma) + 30.0;
    if (n >= 2) d.y[n] = sym[n - 2];
  }
  return d;
}

inline task_dataset generate_task(const std::string& task_id, std::size_t length,
                                  std::uint64_t seed, double snr_db = 32.0) {
  if (task_id == "narma10") return gen_narma10(length, seed);
  if (task_id == "classification") return gen_classification(length, seed);
  if (task_id == "equalization") return gen_equalization(length, seed, snr_db);
  throw config_error("unknown task id '" + task_id + "'");
}

}  // namespace ringrc
