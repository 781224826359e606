// Power x detuning sweep orchestration: grid construction, per-point
// multi-seed evaluation, append-only checkpointing with resume, heatmap
// export, and best-point lookup.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "ringrc/common.hpp"
#include "ringrc/csv.hpp"
#include "ringrc/experiment.hpp"

namespace ringrc {

inline constexpr int sweep_schema_version = 1;

struct sweep_plan {
  // locked mode: cartesian grid of total average power (split equally over
  // the channels) and one detuning shared by all channels
  std::vector<double> power_dbm;
  std::vector<double> detuning_ghz;
  // per_channel mode: explicit per-channel settings, one entry per point
  std::string mode = "locked";
  std::vector<std::vector<double>> channel_powers_dbm;
  std::vector<std::vector<double>> channel_detunings_ghz;
  std::vector<std::uint64_t> seeds = {1, 2, 3};

  std::size_t point_count() const {
    return mode == "locked" ? power_dbm.size() * detuning_ghz.size()
                            : channel_powers_dbm.size();
  }

  void validate(std::size_t channel_count) const {
    if (seeds.empty()) throw config_error("sweep needs at least one seed");
    if (mode == "locked") {
      if (power_dbm.empty() || detuning_ghz.empty())
        throw config_error("locked sweep needs non-empty power and detuning grids");
    } else if (mode == "per_channel") {
      if (channel_powers_dbm.empty())
        throw config_error("per_channel sweep needs explicit channel settings");
      if (channel_powers_dbm.size() != channel_detunings_ghz.size())
        throw config_error("per_channel power and detuning lists must pair up");
      for (std::size_t k = 0; k < channel_powers_dbm.size(); ++k)
        if (channel_powers_dbm[k].size() != channel_count ||
            channel_detunings_ghz[k].size() != channel_count)
          throw config_error("per_channel point " + std::to_string(k) + " must list " +
                             std::to_string(channel_count) + " channels");
    } else {
      throw config_error("sweep mode must be 'locked' or 'per_channel'");
    }
  }
};

// Raw per-point record; exactly what the checkpoint stores.
struct point_record {
  std::size_t index = 0;
  double power_dbm = 0.0;    // locked: total power; per_channel: channel 0
  double detuning_ghz = 0.0;
  std::vector<bool> seed_ok;
  // [task][seed], NaN where the seed diverged
  std::vector<std::vector<double>> values;
};

struct sweep_result {
  std::vector<std::string> tasks;  // active channel task ids, channel order
  std::vector<std::uint64_t> seeds;
  std::vector<point_record> points;  // power-major order
};

struct point_summary {
  double power_dbm = 0.0;
  double detuning_ghz = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n_seeds = 0;
  bool diverged = false;  // every seed diverged
};

inline point_summary summarize_point(const point_record& rec, std::size_t task_idx) {
  point_summary s;
  s.power_dbm = rec.power_dbm;
  s.detuning_ghz = rec.detuning_ghz;
  for (double v : rec.values[task_idx])
    if (std::isfinite(v)) {
      s.mean += v;
      ++s.n_seeds;
    }
  if (s.n_seeds == 0) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    s.stddev = std::numeric_limits<double>::quiet_NaN();
    s.diverged = true;
    return s;
  }
  s.mean /= static_cast<double>(s.n_seeds);
  for (double v : rec.values[task_idx])
    if (std::isfinite(v)) s.stddev += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(s.stddev / static_cast<double>(s.n_seeds));
  return s;
}

// Applies one grid point to a copy of the experiment template.
inline experiment_config point_config(const experiment_config& base, const sweep_plan& plan,
                                      std::size_t index) {
  experiment_config cfg = base;
  if (plan.mode == "locked") {
    const std::size_t di = index % plan.detuning_ghz.size();
    const std::size_t pi = index / plan.detuning_ghz.size();
    const double per_channel_w =
        dbm_to_watt(plan.power_dbm[pi]) / static_cast<double>(cfg.channels.size());
    for (auto& ch : cfg.channels) {
      ch.power_dbm = watt_to_dbm(per_channel_w);
      ch.detuning_ghz = plan.detuning_ghz[di];
    }
  } else {
    for (std::size_t i = 0; i < cfg.channels.size(); ++i) {
      cfg.channels[i].power_dbm = plan.channel_powers_dbm[index][i];
      cfg.channels[i].detuning_ghz = plan.channel_detunings_ghz[index][i];
    }
  }
  return cfg;
}

inline void point_coordinates(const sweep_plan& plan, std::size_t index, double& power_dbm,
                              double& detuning_ghz) {
  if (plan.mode == "locked") {
    power_dbm = plan.power_dbm[index / plan.detuning_ghz.size()];
    detuning_ghz = plan.detuning_ghz[index % plan.detuning_ghz.size()];
  } else {
    power_dbm = plan.channel_powers_dbm[index][0];
    detuning_ghz = plan.channel_detunings_ghz[index][0];
  }
}

inline std::vector<std::string> active_tasks(const experiment_config& cfg) {
  std::vector<std::string> tasks;
  for (const auto& ch : cfg.channels)
    if (!ch.dark) tasks.push_back(ch.task);
  return tasks;
}

// Evaluates one grid point over all plan seeds. A seed whose integration
// diverges, or whose readout solve cannot be certified at the configured
// regularization, is recorded as NaN values for that seed; other errors
// propagate. The two failure kinds share one per-seed flag because both mean
// the operating point produced no usable readout.
inline point_record evaluate_point(const experiment_config& base, const sweep_plan& plan,
                                   std::size_t index) {
  const experiment_config cfg = point_config(base, plan, index);
  const std::vector<std::string> tasks = active_tasks(cfg);
  point_record rec;
  rec.index = index;
  point_coordinates(plan, index, rec.power_dbm, rec.detuning_ghz);
  rec.values.assign(tasks.size(), std::vector<double>(plan.seeds.size(),
                                                      std::numeric_limits<double>::quiet_NaN()));
  rec.seed_ok.assign(plan.seeds.size(), false);
  for (std::size_t s = 0; s < plan.seeds.size(); ++s) {
    try {
      experiment_result r = run_experiment(cfg, plan.seeds[s]);
      std::size_t t = 0;
      for (const auto& cr : r.channels)
        if (cr.active) rec.values[t++][s] = cr.report.mean;
      rec.seed_ok[s] = true;
    } catch (const integration_diverged&) {
      rec.seed_ok[s] = false;
    } catch (const regularization_required&) {
      rec.seed_ok[s] = false;
    }
  }
  return rec;
}

inline nlohmann::json record_to_json(const point_record& rec,
                                     const std::vector<std::string>& tasks) {
  nlohmann::json j;
  j["schema_version"] = sweep_schema_version;
  j["point"] = rec.index;
  j["power_dbm"] = rec.power_dbm;
  j["detuning_ghz"] = rec.detuning_ghz;
  j["seed_ok"] = rec.seed_ok;
  nlohmann::json vals;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    nlohmann::json arr = nlohmann::json::array();
    for (double v : rec.values[t]) {
      if (std::isfinite(v))
        arr.push_back(v);
      else
        arr.push_back(nullptr);
    }
    vals[tasks[t]] = arr;
  }
  j["values"] = vals;
  return j;
}

inline point_record record_from_json(const nlohmann::json& j,
                                     const std::vector<std::string>& tasks) {
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != sweep_schema_version)
    throw io_error("checkpoint record has an unsupported schema version");
  point_record rec;
  rec.index = j.at("point").get<std::size_t>();
  rec.power_dbm = j.at("power_dbm").get<double>();
  rec.detuning_ghz = j.at("detuning_ghz").get<double>();
  rec.seed_ok = j.at("seed_ok").get<std::vector<bool>>();
  const auto& vals = j.at("values");
  for (const auto& task : tasks) {
    if (!vals.contains(task)) throw io_error("checkpoint record is missing task '" + task + "'");
    std::vector<double> v;
    for (const auto& e : vals.at(task))
      v.push_back(e.is_null() ? std::numeric_limits<double>::quiet_NaN() : e.get<double>());
    rec.values.push_back(std::move(v));
  }
  return rec;
}

// Loads completed point records from an NDJSON checkpoint. Records whose
// coordinates disagree with the plan are rejected (stale checkpoint).
inline std::vector<point_record> load_checkpoint(const std::string& path, const sweep_plan& plan,
                                                 const std::vector<std::string>& tasks) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open checkpoint '" + path + "'");
  std::vector<point_record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw io_error("checkpoint '" + path + "' line " + std::to_string(line_no) +
                     " is not valid JSON: " + e.what());
    }
    point_record rec = record_from_json(j, tasks);
    if (rec.index >= plan.point_count() || rec.seed_ok.size() != plan.seeds.size())
      throw io_error("checkpoint '" + path + "' does not match the sweep plan; use --overwrite");
    double p = 0.0, d = 0.0;
    point_coordinates(plan, rec.index, p, d);
    if (p != rec.power_dbm || d != rec.detuning_ghz)
      throw io_error("checkpoint '" + path + "' does not match the sweep plan; use --overwrite");
    records.push_back(std::move(rec));
  }
  return records;
}

// Checkpoint contents without a plan to validate against; task names are
// inferred from the records (alphabetical, as stored).
struct checkpoint_dump {
  std::vector<std::string> tasks;
  std::vector<point_record> records;  // sorted by grid index, deduplicated
};

inline checkpoint_dump load_checkpoint_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open checkpoint '" + path + "'");
  checkpoint_dump dump;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw io_error("checkpoint '" + path + "' line " + std::to_string(line_no) +
                     " is not valid JSON: " + e.what());
    }
    if (dump.tasks.empty())
      for (const auto& item : j.at("values").items()) dump.tasks.push_back(item.key());
    dump.records.push_back(record_from_json(j, dump.tasks));
  }
  std::stable_sort(dump.records.begin(), dump.records.end(),
                   [](const point_record& a, const point_record& b) { return a.index < b.index; });
  std::vector<point_record> unique;
  for (auto& rec : dump.records) {
    if (!unique.empty() && unique.back().index == rec.index)
      unique.back() = std::move(rec);
    else
      unique.push_back(std::move(rec));
  }
  dump.records = std::move(unique);
  return dump;
}

struct sweep_options {
  std::string checkpoint_path;  // empty disables checkpointing
  bool resume = false;
  int threads = 1;
};

// Runs every grid point not already in the checkpoint, in parallel across
// points. Output order is grid order regardless of thread count.
inline sweep_result run_sweep(const experiment_config& base, const sweep_plan& plan,
                              const sweep_options& opt = {}) {
  base.validate();
  plan.validate(base.channels.size());
  if (opt.threads < 1) throw config_error("thread count must be >= 1");

  sweep_result result;
  result.tasks = active_tasks(base);
  result.seeds = plan.seeds;
  if (result.tasks.empty()) throw config_error("sweep needs at least one non-dark channel");

  const std::size_t n = plan.point_count();
  std::vector<point_record> records(n);
  std::vector<char> done(n, 0);
  if (opt.resume && !opt.checkpoint_path.empty()) {
    for (auto& rec : load_checkpoint(opt.checkpoint_path, plan, result.tasks)) {
      const std::size_t idx = rec.index;
      done[idx] = 1;
      records[idx] = std::move(rec);
    }
  }

  std::ofstream ckpt;
  if (!opt.checkpoint_path.empty()) {
    ckpt.open(opt.checkpoint_path, opt.resume ? std::ios::app : std::ios::trunc);
    if (!ckpt) throw io_error("cannot open checkpoint '" + opt.checkpoint_path + "' for writing");
  }

  std::mutex sink_mutex;
  std::size_t next = 0;
  std::exception_ptr failure;
  auto worker = [&]() {
    for (;;) {
      std::size_t idx;
      {
        std::lock_guard<std::mutex> lock(sink_mutex);
        while (next < n && done[next]) ++next;
        if (next >= n || failure) return;
        idx = next++;
      }
      try {
        point_record rec = evaluate_point(base, plan, idx);
        std::lock_guard<std::mutex> lock(sink_mutex);
        if (ckpt.is_open()) {
          ckpt << record_to_json(rec, result.tasks).dump() << "\n";
          ckpt.flush();
        }
        records[idx] = std::move(rec);
        done[idx] = 1;
      } catch (...) {
        std::lock_guard<std::mutex> lock(sink_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (opt.threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < opt.threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  result.points = std::move(records);
  return result;
}

struct best_point {
  double power_dbm = 0.0;
  double detuning_ghz = 0.0;
  double value = 0.0;
};

inline bool metric_lower_is_better(const std::string& task) { return task != "classification"; }

// Best grid point for a task: argmin for NMSE/SER, argmax for accuracy.
// Ties break to lower power, then smaller |detuning|.
inline best_point find_best(const sweep_result& result, const std::string& task) {
  std::size_t task_idx = result.tasks.size();
  for (std::size_t t = 0; t < result.tasks.size(); ++t)
    if (result.tasks[t] == task) task_idx = t;
  if (task_idx == result.tasks.size())
    throw config_error("task '" + task + "' is not part of this sweep");
  const bool lower = metric_lower_is_better(task);
  bool found = false;
  best_point best;
  for (const auto& rec : result.points) {
    point_summary s = summarize_point(rec, task_idx);
    if (s.diverged) continue;
    bool better = false;
    if (!found) {
      better = true;
    } else if (s.mean != best.value) {
      better = lower ? s.mean < best.value : s.mean > best.value;
    } else if (s.power_dbm != best.power_dbm) {
      better = s.power_dbm < best.power_dbm;
    } else {
      better = std::abs(s.detuning_ghz) < std::abs(best.detuning_ghz);
    }
    if (better) {
      best.power_dbm = s.power_dbm;
      best.detuning_ghz = s.detuning_ghz;
      best.value = s.mean;
      found = true;
    }
  }
  if (!found) throw no_optimum("every grid point diverged for task '" + task + "'");
  return best;
}

// Heatmap rows in grid (power-major) order.
inline void export_heatmap_csv(const sweep_result& result, const std::string& task,
                               const std::string& path) {
  std::size_t task_idx = result.tasks.size();
  for (std::size_t t = 0; t < result.tasks.size(); ++t)
    if (result.tasks[t] == task) task_idx = t;
  if (task_idx == result.tasks.size())
    throw config_error("task '" + task + "' is not part of this sweep");
  std::vector<std::vector<std::string>> rows;
  for (const auto& rec : result.points) {
    point_summary s = summarize_point(rec, task_idx);
    rows.push_back({fmt_g17(s.power_dbm), fmt_g17(s.detuning_ghz), fmt_g17(s.mean),
                    fmt_g17(s.stddev), std::to_string(s.n_seeds), s.diverged ? "1" : "0"});
  }
  write_csv(path, "power_dbm,detuning_ghz,metric_mean,metric_std,n_seeds,diverged", rows);
}

}  // namespace ringrc
