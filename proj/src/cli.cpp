#include "pater/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "pater/evaluation.hpp"
#include "pater/registry.hpp"
#include "pater/rng.hpp"
#include "pater/significance.hpp"
#include "pater/synthetic.hpp"

namespace pater {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string sanitize(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    out.push_back(ok ? c : '-');
  }
  return out;
}

std::vector<std::string> split_commas(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const std::string& item : raw) {
    std::istringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

/// All output files land via temp-file + rename so readers never observe a
/// partial write.
void write_file(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, path);
}

void parallel_run(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// -------------------------------------------------------------------------
// Configuration
// -------------------------------------------------------------------------

struct CliConfig {
  std::vector<std::string> algorithms;
  std::vector<std::string> datasets;
  std::string registry_path;
  std::uint64_t seed = 1;
  int runs = 10;
  double alpha_neg = 1.0;
  double alpha_pos = 1.0;
  std::vector<double> grid;
  std::string normalize = "per-fold";
  bool clip_tau = false;
  std::string out_dir = "pater_out";
  unsigned threads = 0;
};

NormalizeMode parse_normalize(const std::string& mode) {
  if (mode == "per-fold") return NormalizeMode::kPerFold;
  if (mode == "global") return NormalizeMode::kGlobal;
  if (mode == "none") return NormalizeMode::kNone;
  throw UsageError("unknown --normalize mode '" + mode + "' (per-fold|global|none)");
}

std::string valid_variant_names() {
  std::string names;
  for (Variant v : all_variants()) {
    if (!names.empty()) names += ", ";
    names += variant_name(v);
  }
  return names;
}

std::vector<Variant> resolve_variants(const std::vector<std::string>& names) {
  if (names.empty()) throw UsageError("no algorithms given (--algo)");
  std::vector<Variant> variants;
  for (const std::string& name : names) {
    const auto v = variant_from_name(name);
    if (!v) {
      throw UsageError("unknown algorithm '" + name + "'; valid variants: " +
                       valid_variant_names());
    }
    variants.push_back(*v);
  }
  return variants;
}

/// Resolves every dataset reference before any evaluation starts: synthetic
/// specs, plain files (by extension), then registry names. All failures are
/// reported together.
std::vector<Dataset> resolve_datasets(const CliConfig& config) {
  if (config.datasets.empty()) throw UsageError("no datasets given (--data)");

  Registry registry;
  bool registry_loaded = false;
  auto ensure_registry = [&]() -> Registry& {
    if (!registry_loaded) {
      std::string path = config.registry_path;
      if (path.empty()) {
        if (const char* env = std::getenv("PATER_DATA_DIR"); env != nullptr && *env) {
          const fs::path candidate = fs::path(env) / "registry.json";
          if (fs::exists(candidate)) path = candidate.string();
        }
      }
      if (path.empty()) {
        throw Error("no registry available (pass --registry or set PATER_DATA_DIR)");
      }
      registry = load_registry(path);
      registry_loaded = true;
    }
    return registry;
  };

  std::vector<Dataset> datasets;
  std::vector<std::string> missing;
  for (const std::string& ref : config.datasets) {
    try {
      if (auto synthetic = make_synthetic(ref, config.seed)) {
        datasets.push_back(std::move(*synthetic));
        continue;
      }
      if (fs::exists(ref)) {
        std::ifstream in(ref);
        if (!in) throw Error("cannot open '" + ref + "'");
        const std::string ext = fs::path(ref).extension().string();
        const std::string name = fs::path(ref).stem().string();
        if (ext == ".csv") {
          DelimitedOptions options;  // label in column 0, default map
          datasets.push_back(load_delimited(in, options, name));
        } else {
          datasets.push_back(load_libsvm(in, LibsvmOptions{}, name));
        }
        continue;
      }
      Registry& reg = ensure_registry();
      const DatasetSpec* spec = reg.find(ref);
      if (spec == nullptr) throw Error("dataset '" + ref + "' not in the registry");
      datasets.push_back(load_registry_dataset(reg, *spec));
    } catch (const std::exception& e) {
      missing.push_back(ref + ": " + e.what());
    }
  }
  if (!missing.empty()) {
    std::string message = "unresolvable datasets:";
    for (const std::string& m : missing) message += "\n  " + m;
    throw Error(message);
  }
  return datasets;
}

EvalOptions eval_options(const CliConfig& config) {
  EvalOptions options;
  options.runs = config.runs;
  options.normalize = parse_normalize(config.normalize);
  options.clip_tau = config.clip_tau;
  return options;
}

ClassWeights effective_alpha(Variant v, const CliConfig& config) {
  if (is_weighted(v)) return ClassWeights{config.alpha_neg, config.alpha_pos};
  return ClassWeights{};
}

json config_json(const CliConfig& config) {
  json j;
  j["algorithms"] = config.algorithms;
  j["datasets"] = config.datasets;
  j["seed"] = config.seed;
  j["runs"] = config.runs;
  j["alpha_neg"] = config.alpha_neg;
  j["alpha_pos"] = config.alpha_pos;
  j["normalize"] = config.normalize;
  j["clip_tau"] = config.clip_tau;
  return j;
}

// -------------------------------------------------------------------------
// run / trace
// -------------------------------------------------------------------------

struct PairTask {
  Variant variant;
  const Dataset* dataset;
};

std::vector<PairTask> make_tasks(const std::vector<Variant>& variants,
                                 const std::vector<Dataset>& datasets) {
  std::vector<PairTask> tasks;
  tasks.reserve(variants.size() * datasets.size());
  for (Variant v : variants) {
    for (const Dataset& d : datasets) tasks.push_back(PairTask{v, &d});
  }
  return tasks;
}

int cmd_run(const CliConfig& config) {
  const std::vector<Variant> variants = resolve_variants(config.algorithms);
  const std::vector<Dataset> datasets = resolve_datasets(config);
  const EvalOptions options = eval_options(config);

  const std::vector<PairTask> tasks = make_tasks(variants, datasets);
  std::vector<AccuracyReport> reports(tasks.size());
  parallel_run(tasks.size(), config.threads, [&](std::size_t i) {
    reports[i] = evaluate_pair(tasks[i].variant, effective_alpha(tasks[i].variant, config),
                               *tasks[i].dataset, config.seed, options);
  });

  fs::create_directories(config.out_dir);

  std::ostringstream report_text;
  report_text << "algorithm\tdataset\tevals\tmean_accuracy\tstddev_accuracy\t"
                 "per_eval_accuracies\n";
  std::ostringstream timing_text;
  timing_text << "algorithm\tdataset\tmean_cpu_seconds\n";
  json summary;
  summary["command"] = "run";
  summary["config"] = config_json(config);
  summary["reports"] = json::array();
  for (const AccuracyReport& report : reports) {
    report_text << report.algorithm << '\t' << report.dataset << '\t'
                << report.per_run_accuracy.size() << '\t' << fmt(report.mean) << '\t'
                << fmt(report.stddev) << '\t';
    for (std::size_t i = 0; i < report.per_run_accuracy.size(); ++i) {
      if (i > 0) report_text << ',';
      report_text << fmt(report.per_run_accuracy[i]);
    }
    report_text << '\n';
    timing_text << report.algorithm << '\t' << report.dataset << '\t'
                << fmt(report.mean_cpu_seconds) << '\n';
    json r;
    r["algorithm"] = report.algorithm;
    r["dataset"] = report.dataset;
    r["mean_accuracy"] = report.mean;
    r["stddev_accuracy"] = report.stddev;
    r["mean_cpu_seconds"] = report.mean_cpu_seconds;
    r["per_eval_accuracy"] = report.per_run_accuracy;
    summary["reports"].push_back(std::move(r));
  }
  write_file(fs::path(config.out_dir) / "reports.tsv", report_text.str());
  write_file(fs::path(config.out_dir) / "timing.tsv", timing_text.str());
  write_file(fs::path(config.out_dir) / "summary.json", summary.dump(2) + "\n");

  for (const AccuracyReport& report : reports) {
    std::cout << report.algorithm << " on " << report.dataset << ": "
              << fmt(report.mean, 3) << " +- " << fmt(report.stddev, 3) << " ("
              << fmt(report.mean_cpu_seconds, 4) << "s cpu)\n";
  }
  std::cout << "wrote " << tasks.size() << " report records to " << config.out_dir
            << "\n";
  return 0;
}

int cmd_trace(const CliConfig& config) {
  const std::vector<Variant> variants = resolve_variants(config.algorithms);
  const std::vector<Dataset> datasets = resolve_datasets(config);
  const EvalOptions options = eval_options(config);

  const std::vector<PairTask> tasks = make_tasks(variants, datasets);
  std::vector<AccuracyReport> reports(tasks.size());
  std::vector<std::vector<FoldTrace>> traces(tasks.size());
  parallel_run(tasks.size(), config.threads, [&](std::size_t i) {
    reports[i] = evaluate_pair(tasks[i].variant, effective_alpha(tasks[i].variant, config),
                               *tasks[i].dataset, config.seed, options, &traces[i]);
  });

  fs::create_directories(config.out_dir);
  std::ostringstream manifest;
  manifest << "algorithm\tdataset\trun\tfold\tsteps\tfinal_cumulative_accuracy\tfile\n";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string algo(variant_name(tasks[i].variant));
    const std::string data_name = sanitize(tasks[i].dataset->name);
    double final_sum = 0.0;
    for (const FoldTrace& ft : traces[i]) {
      std::ostringstream body;
      body << "step\tcumulative_accuracy\n";
      for (std::size_t t = 0; t < ft.trace.steps.size(); ++t) {
        body << ft.trace.steps[t] << '\t' << fmt(ft.trace.cumulative_accuracy[t]) << '\n';
      }
      const std::string file_name = "trace_" + algo + "__" + data_name + "__r" +
                                    std::to_string(ft.run) + "_f" +
                                    std::to_string(ft.fold) + ".tsv";
      write_file(fs::path(config.out_dir) / file_name, body.str());
      const double final_value =
          ft.trace.cumulative_accuracy.empty() ? 0.0 : ft.trace.cumulative_accuracy.back();
      final_sum += final_value;
      manifest << algo << '\t' << tasks[i].dataset->name << '\t' << ft.run << '\t'
               << ft.fold << '\t' << ft.trace.steps.size() << '\t' << fmt(final_value)
               << '\t' << file_name << '\n';
    }
    std::cout << algo << " on " << tasks[i].dataset->name
              << ": mean final cumulative accuracy "
              << fmt(final_sum / static_cast<double>(traces[i].size()), 4) << " ("
              << fmt(reports[i].mean, 3) << " held-out)\n";
  }
  write_file(fs::path(config.out_dir) / "manifest.tsv", manifest.str());
  return 0;
}

// -------------------------------------------------------------------------
// sweep
// -------------------------------------------------------------------------

int cmd_sweep(const CliConfig& config) {
  const std::vector<Variant> variants = resolve_variants(config.algorithms);
  for (Variant v : variants) {
    if (!is_weighted(v)) {
      throw UsageError("sweep applies to weighted variants only; '" +
                       std::string(variant_name(v)) + "' has no class weights");
    }
  }
  const std::vector<Dataset> datasets = resolve_datasets(config);
  const EvalOptions options = eval_options(config);
  std::vector<double> grid = config.grid;
  if (grid.empty()) {
    grid.assign(default_alpha_grid().begin(), default_alpha_grid().end());
  }

  const std::vector<PairTask> tasks = make_tasks(variants, datasets);
  std::vector<SweepResult> results(tasks.size());
  parallel_run(tasks.size(), config.threads, [&](std::size_t i) {
    results[i] =
        sweep_weights(tasks[i].variant, *tasks[i].dataset, grid, config.seed, options);
  });

  fs::create_directories(config.out_dir);
  std::ostringstream table;
  table << "algorithm\tdataset\tratio\tneeded_weight\tbest_weight\tmatch\t"
           "best_alpha_neg\tbest_alpha_pos\tbest_mean_accuracy\t"
           "best_mean_balanced_accuracy\n";
  int matches = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const SweepResult& r = results[i];
    const SweepConfigResult& best = r.configs[r.best_index];
    matches += r.match ? 1 : 0;
    table << variant_name(tasks[i].variant) << '\t' << tasks[i].dataset->name << '\t'
          << fmt(tasks[i].dataset->imbalance_ratio(), 4) << '\t' << r.needed_weight
          << '\t' << r.best_weight << '\t' << (r.match ? 1 : 0) << '\t'
          << fmt(best.alpha.neg, 2) << '\t' << fmt(best.alpha.pos, 2) << '\t'
          << fmt(best.mean_accuracy) << '\t' << fmt(best.mean_balanced_accuracy) << '\n';
  }
  table << "# matches " << matches << " of " << tasks.size() << '\n';
  write_file(fs::path(config.out_dir) / "sweep.tsv", table.str());
  std::cout << table.str();
  std::cout << "wrote sweep table to " << config.out_dir << "\n";
  return 0;
}

// -------------------------------------------------------------------------
// compare
// -------------------------------------------------------------------------

struct ParsedReports {
  std::vector<std::string> algorithms;
  std::vector<std::string> datasets;
  std::vector<std::vector<double>> means;  // [dataset][algorithm]
};

ParsedReports read_report_files(const std::vector<std::string>& files) {
  std::map<std::string, std::map<std::string, double>> cells;  // dataset -> algo -> mean
  std::vector<std::string> algorithms, datasets;
  for (const std::string& file : files) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open report file '" + file + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line.rfind("algorithm\t", 0) == 0 || line[0] == '#') continue;
      std::istringstream ss(line);
      std::string algo, dataset, evals, mean_text;
      if (!std::getline(ss, algo, '\t') || !std::getline(ss, dataset, '\t') ||
          !std::getline(ss, evals, '\t') || !std::getline(ss, mean_text, '\t')) {
        throw ParseError("report file '" + file + "': malformed record", line_no);
      }
      char* end = nullptr;
      const double mean = std::strtod(mean_text.c_str(), &end);
      if (end != mean_text.c_str() + mean_text.size()) {
        throw ParseError("report file '" + file + "': bad mean '" + mean_text + "'",
                         line_no);
      }
      if (cells.find(dataset) == cells.end()) datasets.push_back(dataset);
      if (cells[dataset].count(algo)) {
        throw ProtocolError("duplicate report record for (" + algo + ", " + dataset + ")");
      }
      cells[dataset][algo] = mean;
      if (std::find(algorithms.begin(), algorithms.end(), algo) == algorithms.end()) {
        algorithms.push_back(algo);
      }
    }
  }
  if (algorithms.size() < 2) {
    throw UsageError("compare needs reports for at least 2 algorithms");
  }

  ParsedReports parsed;
  parsed.algorithms = algorithms;
  parsed.datasets = datasets;
  std::vector<std::string> missing;
  for (const std::string& dataset : datasets) {
    std::vector<double> row;
    for (const std::string& algo : algorithms) {
      auto it = cells[dataset].find(algo);
      if (it == cells[dataset].end()) {
        missing.push_back("(" + algo + ", " + dataset + ")");
      } else {
        row.push_back(it->second);
      }
    }
    parsed.means.push_back(std::move(row));
  }
  if (!missing.empty()) {
    std::string message = "incomplete report grid; missing cells:";
    for (const std::string& m : missing) message += " " + m;
    throw ProtocolError(message);
  }
  return parsed;
}

int cmd_compare(const std::vector<std::string>& files, double confidence,
                const std::string& out_dir) {
  const ParsedReports parsed = read_report_files(files);
  const SignificanceResult result = friedman_nemenyi(parsed.means, confidence);

  std::cout << "algorithms: " << parsed.algorithms.size()
            << ", datasets: " << parsed.datasets.size() << "\n";
  std::cout << "Friedman chi-square: " << fmt(result.friedman_statistic, 4) << "\n";
  std::cout << "critical difference (q" << fmt(confidence, 2)
            << "): " << fmt(result.critical_difference, 4) << "\n";
  std::cout << "mean ranks:\n";
  for (std::size_t j = 0; j < parsed.algorithms.size(); ++j) {
    std::cout << "  " << parsed.algorithms[j] << ": " << fmt(result.mean_ranks[j], 4)
              << "\n";
  }
  std::cout << "indistinguishable groups (rank gap <= CD):\n";
  for (const auto& group : result.groups) {
    std::cout << " ";
    for (std::size_t idx : group) std::cout << " " << parsed.algorithms[idx];
    std::cout << "\n";
  }

  fs::create_directories(out_dir);
  std::ostringstream data;
  data << "algorithm\tmean_rank\n";
  for (std::size_t j = 0; j < parsed.algorithms.size(); ++j) {
    data << parsed.algorithms[j] << '\t' << fmt(result.mean_ranks[j]) << '\n';
  }
  data << "# critical_difference\t" << fmt(result.critical_difference) << '\n';
  data << "# friedman_statistic\t" << fmt(result.friedman_statistic) << '\n';
  write_file(fs::path(out_dir) / "nemenyi.tsv", data.str());

  json j;
  j["command"] = "compare";
  j["algorithms"] = parsed.algorithms;
  j["mean_ranks"] = result.mean_ranks;
  j["friedman_statistic"] = result.friedman_statistic;
  j["critical_difference"] = result.critical_difference;
  j["groups"] = json::array();
  for (const auto& group : result.groups) {
    json names = json::array();
    for (std::size_t idx : group) names.push_back(parsed.algorithms[idx]);
    j["groups"].push_back(std::move(names));
  }
  write_file(fs::path(out_dir) / "nemenyi.json", j.dump(2) + "\n");
  return 0;
}

void add_common_flags(CLI::App* cmd, CliConfig& config, bool with_alpha = true) {
  cmd->add_option("--algo", config.algorithms,
                  "algorithms (pe, pa, pater1, pater2, wpater1, wpater2)");
  cmd->add_option("--data", config.datasets,
                  "dataset names, file paths, or synthetic:... specs");
  cmd->add_option("--registry", config.registry_path, "dataset registry JSON file");
  cmd->add_option("--seed", config.seed, "global seed");
  cmd->add_option("--runs", config.runs, "cross-validation repetitions")
      ->check(CLI::PositiveNumber);
  if (with_alpha) {
    cmd->add_option("--alpha-neg", config.alpha_neg, "negative-class weight")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--alpha-pos", config.alpha_pos, "positive-class weight")
        ->check(CLI::PositiveNumber);
  }
  cmd->add_option("--normalize", config.normalize, "per-fold|global|none");
  cmd->add_flag("--clip-tau", config.clip_tau, "clamp tau at zero");
  cmd->add_option("--out", config.out_dir, "output directory");
  cmd->add_option("--threads", config.threads, "worker threads (0 = hardware)");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"PATER/wPATER online total-error-rate learners and benchmark harness"};
  app.require_subcommand(1);

  CliConfig config;
  std::vector<std::string> grid_raw;
  std::vector<std::string> report_files;
  double confidence = 0.05;

  CLI::App* run = app.add_subcommand("run", "accuracy/timing protocol over datasets");
  add_common_flags(run, config);

  CLI::App* sweep = app.add_subcommand("sweep", "best-weight analysis over the alpha grid");
  add_common_flags(sweep, config);
  sweep->add_option("--grid", grid_raw, "alpha grid values (comma separated)");

  CLI::App* compare = app.add_subcommand("compare", "Friedman/Nemenyi over report files");
  compare->add_option("--reports", report_files, "reports.tsv files")->required();
  compare->add_option("--confidence", confidence, "0.05 or 0.10");
  compare->add_option("--out", config.out_dir, "output directory");

  CLI::App* trace = app.add_subcommand("trace", "cumulative prequential accuracy traces");
  add_common_flags(trace, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    config.algorithms = split_commas(config.algorithms);
    if (config.algorithms.empty()) {
      for (Variant v : all_variants()) config.algorithms.emplace_back(variant_name(v));
    }
    config.datasets = split_commas(config.datasets);
    for (const std::string& g : split_commas(grid_raw)) {
      char* end = nullptr;
      const double v = std::strtod(g.c_str(), &end);
      if (end != g.c_str() + g.size()) throw UsageError("bad --grid value '" + g + "'");
      config.grid.push_back(v);
    }

    if (run->parsed()) return cmd_run(config);
    if (sweep->parsed()) {
      if (!sweep->count("--algo")) config.algorithms = {"wpater1"};
      return cmd_sweep(config);
    }
    if (compare->parsed()) {
      return cmd_compare(split_commas(report_files), confidence, config.out_dir);
    }
    if (trace->parsed()) return cmd_trace(config);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("pater");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace pater
