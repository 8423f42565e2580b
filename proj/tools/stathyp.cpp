#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>

#include "stathyp/errors.hpp"
#include "stathyp/experiment.hpp"

namespace fs = std::filesystem;
using namespace stathyp;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string format = "summary";
};

// Runs one config and writes <stem>.csv and <stem>.summary.txt. Returns an exit code.
int run_one(const std::string& path, const Options& opt, bool print) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config_file(path);
    cfg.seed = effective_seed(cfg, opt.seed);
    if (opt.workers) cfg.workers = *opt.workers;
    // Profile paths are relative to the config file.
    if (!cfg.profile_path.empty() && fs::path(cfg.profile_path).is_relative())
      cfg.profile_path = (fs::path(path).parent_path() / cfg.profile_path).string();
  } catch (const Error& e) {
    std::cerr << "parameter-error: " << path << ": " << e.what() << '\n';
    return exit_config_error;
  }
  Report report;
  try {
    report = run_experiment(cfg);
  } catch (const ParameterError& e) {
    std::cerr << "parameter-error: " << path << ": " << e.what() << '\n';
    return exit_config_error;
  } catch (const Error& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
    return exit_invariant_failure;
  }
  const std::string csv = to_csv(report), summary = to_summary(report);
  const std::string stem = cfg.output.empty() ? fs::path(path).stem().string() : cfg.output;
  try {
    fs::create_directories(opt.out);
    write_atomically((fs::path(opt.out) / (stem + ".csv")).string(), csv);
    write_atomically((fs::path(opt.out) / (stem + ".summary.txt")).string(), summary);
  } catch (const std::exception& e) {
    std::cerr << "io-error: " << e.what() << '\n';
    return exit_io_error;
  }
  if (print) std::cout << (opt.format == "csv" ? csv : summary);
  if (!report.passed()) {
    std::cerr << "invariant-failure: " << path << '\n';
    return exit_invariant_failure;
  }
  return exit_ok;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--out", opt.out, "output directory");
  cmd->add_option("--seed", opt.seed, "override the config and STATHYP_SEED seed");
  cmd->add_option("--workers", opt.workers, "worker threads (default STATHYP_WORKERS or hardware)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", opt.format, "stdout format")->check(CLI::IsMember({"csv", "summary"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments on model metric spaces"};
  app.require_subcommand(1);
  Options opt;

  auto* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("--config", opt.config, "INI config file")->required();
  add_common(run, opt);

  std::string dir;
  auto* sweep = app.add_subcommand("sweep", "run every *.ini in a directory");
  sweep->add_option("--dir", dir, "directory of configs")->required()->check(CLI::ExistingDirectory);
  add_common(sweep, opt);

  std::string kind;
  auto* list = app.add_subcommand("list", "print the experiment catalog as JSON");
  auto* show = app.add_subcommand("defaults", "print the default config of an experiment kind");
  show->add_option("kind", kind, "experiment kind")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config_error;
  }

  if (*list) {
    std::cout << catalog_json() << '\n';
    return exit_ok;
  }
  if (*show) {
    try {
      write_config(std::cout, default_config(kind));
    } catch (const Error& e) {
      std::cerr << "parameter-error: " << e.what() << '\n';
      return exit_config_error;
    }
    return exit_ok;
  }
  if (*run) return run_one(opt.config, opt, true);

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ini") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "parameter-error: no *.ini files in " << dir << '\n';
    return exit_config_error;
  }
  int worst = exit_ok;
  for (const auto& f : files) {
    const int code = run_one(f, opt, false);
    std::cout << (code == exit_ok ? "ok   " : "fail ") << f << '\n';
    worst = std::max(worst, code);
  }
  return worst;
}
