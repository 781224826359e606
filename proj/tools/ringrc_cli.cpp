// Command-line front end: single runs, parameter sweeps, dataset export,
// the linear-spectrum oracle, and checkpoint reporting.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ringrc/config.hpp"
#include "ringrc/csv.hpp"
#include "ringrc/experiment.hpp"
#include "ringrc/ring.hpp"
#include "ringrc/sweep.hpp"
#include "ringrc/tasks.hpp"

namespace {

using namespace ringrc;

constexpr const char* tool_version = "1.0.0";

struct run_options {
  std::string config_path;
  std::string output_dir;
  std::vector<std::string> tasks;
  bool dump_weights = false;
  bool dump_states = false;
};

struct sweep_cmd_options {
  std::string config_path;
  std::string plan_path;
  std::string output_dir;
  std::string checkpoint_path;
  bool resume = false;
  bool overwrite = false;
  bool dry_run = false;
  int threads = 0;  // 0 = unset, fall back to RINGRC_THREADS, then 1
};

struct spectrum_options {
  std::string config_path;
  std::string output_path = "spectrum.csv";
  double span_ghz = 40.0;
  int points = 1001;
};

struct gen_task_options {
  std::string task;
  std::size_t length = 1000;
  std::uint64_t seed = 1;
  double snr_db = 32.0;
  std::string output_path;
};

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("RINGRC_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw config_error("RINGRC_THREADS must be a positive integer, got '" + std::string(env) +
                         "'");
    return static_cast<int>(v);
  }
  return 1;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory '" + dir + "': " + ec.message());
}

// Aggregate of one task's reports across seeds.
struct task_rollup {
  std::vector<double> seed_means;

  double mean() const {
    double m = 0.0;
    for (double v : seed_means) m += v;
    return m / static_cast<double>(seed_means.size());
  }
  double stddev() const {
    double m = mean(), s = 0.0;
    for (double v : seed_means) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(seed_means.size()));
  }
};

int cmd_run(const run_options& opt) {
  run_config rc = load_run_config(opt.config_path);
  if (!opt.output_dir.empty()) rc.output_dir = opt.output_dir;
  experiment_config& cfg = rc.experiment;
  cfg.keep_features = opt.dump_states;

  if (!opt.tasks.empty()) {
    std::set<std::string> wanted(opt.tasks.begin(), opt.tasks.end());
    for (auto& ch : cfg.channels)
      if (!wanted.count(ch.task)) ch.dark = true;
    std::set<std::string> present;
    for (const auto& ch : cfg.channels)
      if (!ch.dark) present.insert(ch.task);
    for (const auto& t : wanted)
      if (!present.count(t))
        throw config_error("--tasks names '" + t + "' but no channel runs that task");
  }
  cfg.validate();
  ensure_dir(rc.output_dir);

  const std::size_t nch = cfg.channels.size();
  std::vector<std::vector<std::vector<std::string>>> metric_rows(nch);
  std::vector<task_rollup> rollups(nch);

  for (std::uint64_t seed : cfg.seeds) {
    experiment_result res = run_experiment(cfg, seed);
    for (std::size_t i = 0; i < nch; ++i) {
      const channel_result& cr = res.channels[i];
      if (!cr.active) continue;
      std::vector<std::string> row = {cr.task, cr.report.kind, std::to_string(seed),
                                      fmt_g17(cr.train_metric), fmt_g17(cr.report.mean),
                                      fmt_g17(cr.report.stddev)};
      for (double v : cr.report.per_subset) row.push_back(fmt_g17(v));
      metric_rows[i].push_back(std::move(row));
      rollups[i].seed_means.push_back(cr.report.mean);

      if (opt.dump_weights)
        write_weights_csv(join_path(rc.output_dir, cr.task + "_weights_seed" +
                                                       std::to_string(seed) + ".csv"),
                          cr.weights.w);
      if (opt.dump_states) {
        std::vector<std::vector<std::string>> rows(res.rows);
        for (std::size_t r = 0; r < res.rows; ++r) {
          rows[r].reserve(res.nodes + 1);
          for (std::size_t c = 0; c < res.nodes; ++c)
            rows[r].push_back(fmt_g17(cr.features[r * res.nodes + c]));
          rows[r].push_back(fmt_g17(1.0));
        }
        std::string header;
        for (std::size_t c = 0; c < res.nodes; ++c) header += "x" + std::to_string(c) + ",";
        header += "bias";
        write_csv(join_path(rc.output_dir,
                            cr.task + "_states_seed" + std::to_string(seed) + ".csv"),
                  header, rows);
      }
    }
  }

  std::string subset_cols;
  for (int s = 0; s < 10; ++s) subset_cols += ",s" + std::to_string(s);
  std::vector<std::string> summary_lines;
  for (std::size_t i = 0; i < nch; ++i) {
    if (metric_rows[i].empty()) continue;
    const std::string& task = cfg.channels[i].task;
    write_csv(join_path(rc.output_dir, task + "_metrics.csv"),
              "task,metric,seed,train_value,mean,std" + subset_cols, metric_rows[i]);
    summary_lines.push_back("task=" + task + " metric=" + metric_rows[i][0][1] +
                            " mean=" + fmt_g17(rollups[i].mean()) +
                            " std=" + fmt_g17(rollups[i].stddev()) +
                            " seeds=" + std::to_string(rollups[i].seed_means.size()));
  }

  std::ofstream summary = open_output(join_path(rc.output_dir, "summary.txt"));
  for (const auto& line : summary_lines) {
    summary << line << "\n";
    std::cout << line << "\n";
  }
  return 0;
}

int cmd_sweep(const sweep_cmd_options& opt) {
  run_config rc = load_run_config(opt.config_path);
  if (!opt.output_dir.empty()) rc.output_dir = opt.output_dir;
  sweep_plan plan = load_sweep_plan(opt.plan_path);
  rc.experiment.validate();
  plan.validate(rc.experiment.channels.size());

  const std::size_t points = plan.point_count();
  const int threads = resolve_threads(opt.threads);
  if (opt.dry_run) {
    std::cout << "grid points: " << points;
    if (plan.mode == "locked")
      std::cout << " (" << plan.power_dbm.size() << " power x " << plan.detuning_ghz.size()
                << " detuning)";
    std::cout << "\nseeds per point: " << plan.seeds.size()
              << "\nwork units: " << points * plan.seeds.size() << "\nthreads: " << threads
              << "\n";
    return 0;
  }

  ensure_dir(rc.output_dir);
  sweep_options sopt;
  sopt.threads = threads;
  sopt.checkpoint_path = opt.checkpoint_path.empty()
                             ? join_path(rc.output_dir, "sweep_checkpoint.ndjson")
                             : opt.checkpoint_path;
  const bool have_checkpoint = std::filesystem::exists(sopt.checkpoint_path);
  if (have_checkpoint && !opt.resume && !opt.overwrite)
    throw config_error("checkpoint '" + sopt.checkpoint_path +
                       "' already exists; pass --resume to continue it or --overwrite to restart");
  sopt.resume = opt.resume && have_checkpoint;

  sweep_result result = run_sweep(rc.experiment, plan, sopt);

  std::uint64_t hash = 14695981039346656037ULL;
  for (char c : config_to_json(rc).dump() + plan_to_json(plan).dump()) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }

  std::vector<std::string> summary_lines;
  summary_lines.push_back("version=" + std::string(tool_version) + " config_hash=" +
                          fmt_g17(static_cast<double>(hash)) + " points=" +
                          std::to_string(points) + " seeds=" + std::to_string(plan.seeds.size()));
  for (const auto& task : result.tasks) {
    export_heatmap_csv(result, task, join_path(rc.output_dir, "sweep_" + task + ".csv"));
    try {
      best_point bp = find_best(result, task);
      summary_lines.push_back("task=" + task + " best_power_dbm=" + fmt_g17(bp.power_dbm) +
                              " best_detuning_ghz=" + fmt_g17(bp.detuning_ghz) +
                              " value=" + fmt_g17(bp.value));
    } catch (const no_optimum&) {
      summary_lines.push_back("task=" + task + " best=none (all grid points diverged)");
    }
  }
  std::ofstream summary = open_output(join_path(rc.output_dir, "sweep_summary.txt"));
  for (const auto& line : summary_lines) {
    summary << line << "\n";
    std::cout << line << "\n";
  }
  return 0;
}

int cmd_spectrum(const spectrum_options& opt) {
  physical_params params;
  if (!opt.config_path.empty()) params = load_run_config(opt.config_path).experiment.physical;
  params.validate();
  if (!(opt.span_ghz > 0.0)) throw config_error("--span-ghz must be > 0");
  if (opt.points < 2) throw config_error("--points must be at least 2");

  std::vector<double> detunings(static_cast<std::size_t>(opt.points));
  const double lo = -opt.span_ghz, hi = opt.span_ghz;
  for (int i = 0; i < opt.points; ++i)
    detunings[static_cast<std::size_t>(i)] =
        two_pi * 1e9 * (lo + (hi - lo) * i / static_cast<double>(opt.points - 1));
  std::vector<spectrum_point> spec = linear_transmission_spectrum(params, detunings);
  std::vector<std::vector<std::string>> rows;
  for (const auto& pt : spec)
    rows.push_back({fmt_g17(pt.detuning_rad_s / (two_pi * 1e9)), fmt_g17(pt.through_power),
                    fmt_g17(pt.drop_power)});
  write_csv(opt.output_path, "detuning_ghz,through_power,drop_power", rows);
  std::cout << "wrote " << rows.size() << " spectrum points to " << opt.output_path << "\n";
  return 0;
}

int cmd_gen_task(const gen_task_options& opt) {
  task_dataset ds = generate_task(opt.task, opt.length, opt.seed, opt.snr_db);
  std::string path = opt.output_path.empty() ? opt.task + "_dataset.csv" : opt.output_path;
  std::vector<std::vector<std::string>> rows(ds.u.size());
  for (std::size_t n = 0; n < ds.u.size(); ++n)
    rows[n] = {std::to_string(n), fmt_g17(ds.u[n]), fmt_g17(ds.y[n])};
  write_csv(path, "n,u,y", rows);
  std::cout << "wrote " << rows.size() << " symbols to " << path << "\n";
  return 0;
}

int cmd_report(const std::string& checkpoint_path) {
  checkpoint_dump dump = load_checkpoint_raw(checkpoint_path);
  if (dump.records.empty()) {
    std::cout << "checkpoint is empty\n";
    return 0;
  }
  sweep_result result;
  result.tasks = dump.tasks;
  result.points = dump.records;
  std::cout << "task              best point              value\n";
  for (const auto& task : result.tasks) {
    std::cout << task;
    for (std::size_t pad = task.size(); pad < 18; ++pad) std::cout << ' ';
    try {
      best_point bp = find_best(result, task);
      std::string point = fmt_g17(bp.power_dbm) + " dBm, " + fmt_g17(bp.detuning_ghz) + " GHz";
      std::cout << point;
      for (std::size_t pad = point.size(); pad < 24; ++pad) std::cout << ' ';
      std::cout << fmt_g17(bp.value) << "\n";
    } catch (const no_optimum&) {
      std::cout << "all points diverged\n";
    }
  }
  std::cout << "points: " << dump.records.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelength-multiplexed time-delay reservoir computing on a microring resonator"};
  app.set_version_flag("--version", tool_version);
  app.require_subcommand(1);

  run_options ropt;
  CLI::App* run = app.add_subcommand("run", "Run the multi-task experiment from a config file");
  run->add_option("--config", ropt.config_path, "Config file (JSON)")->required();
  run->add_option("--output-dir", ropt.output_dir, "Override the config's output directory");
  run->add_option("--tasks", ropt.tasks,
                  "Only drive channels running these tasks; the rest stay dark")
      ->delimiter(',');
  run->add_flag("--dump-weights", ropt.dump_weights, "Write readout weights per task and seed");
  run->add_flag("--dump-states", ropt.dump_states, "Write state matrices per task and seed");

  sweep_cmd_options sopt;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a power x detuning parameter sweep");
  sweep->add_option("--config", sopt.config_path, "Config file (JSON)")->required();
  sweep->add_option("--plan", sopt.plan_path, "Sweep plan file (JSON)")->required();
  sweep->add_option("--output-dir", sopt.output_dir, "Override the config's output directory");
  sweep->add_option("--checkpoint", sopt.checkpoint_path, "Checkpoint file path");
  sweep->add_flag("--resume", sopt.resume, "Continue from an existing checkpoint");
  sweep->add_flag("--overwrite", sopt.overwrite, "Discard an existing checkpoint");
  sweep->add_flag("--dry-run", sopt.dry_run, "Print the grid size and exit without simulating");
  sweep->add_option("--threads", sopt.threads, "Worker threads (default: RINGRC_THREADS or 1)");

  spectrum_options popt;
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "Write the linear transmission spectrum oracle");
  spectrum->add_option("--config", popt.config_path, "Config file for physical parameters");
  spectrum->add_option("--span-ghz", popt.span_ghz, "Half-width of the detuning range in GHz");
  spectrum->add_option("--points", popt.points, "Number of detuning samples");
  spectrum->add_option("--output", popt.output_path, "Output CSV path");

  gen_task_options gopt;
  CLI::App* gen = app.add_subcommand("gen-task", "Export a benchmark task dataset as CSV");
  gen->add_option("--task", gopt.task, "narma10 | classification | equalization")->required();
  gen->add_option("--length", gopt.length, "Number of symbols")->required();
  gen->add_option("--seed", gopt.seed, "Generator seed");
  gen->add_option("--snr-db", gopt.snr_db, "Equalization channel SNR in dB");
  gen->add_option("--output", gopt.output_path, "Output CSV path");

  std::string report_checkpoint;
  CLI::App* report = app.add_subcommand("report", "Summarize a sweep checkpoint");
  report->add_option("--checkpoint", report_checkpoint, "Checkpoint file (NDJSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(ropt);
    if (sweep->parsed()) return cmd_sweep(sopt);
    if (spectrum->parsed()) return cmd_spectrum(popt);
    if (gen->parsed()) return cmd_gen_task(gopt);
    if (report->parsed()) return cmd_report(report_checkpoint);
  } catch (const integration_diverged& e) {
    std::cerr << "simulation failure: " << e.what() << "\n";
    return 1;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const generation_failed& e) {
    std::cerr << "simulation failure: " << e.what() << "\n";
    return 1;
  } catch (const regularization_required& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "simulation failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
