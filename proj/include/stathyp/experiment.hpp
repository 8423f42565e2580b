#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stathyp/convex_body.hpp"
#include "stathyp/finsler.hpp"
#include "stathyp/model_space.hpp"

namespace stathyp {

/// Space descriptor as written in a config: [space] plus [factorN] sections.
struct SpaceSpec {
  std::string kind = "euclidean-p-norm";
  int dimension = 2;
  double p = 2.0;
  int valence = 3;
  std::optional<double> growth;
  std::vector<SpaceSpec> factors;

  ModelSpace build() const;
  bool operator==(const SpaceSpec&) const = default;
};

/// Convex body descriptor ([body] section) for the mahler and densities kinds.
/// kind: polytope | ellipsoid | lp-ball | random-polytopes | random-ellipsoids.
struct BodySpec {
  std::string kind = "random-polytopes";
  int dimension = 2;
  double p = 2.0;
  std::vector<RealVector> vertices;
  RealVector axes;
  std::size_t count = 1000;
  std::string method = "exact";  // exact | monte-carlo
  double target_rel_error = 1e-3;

  bool operator==(const BodySpec&) const = default;
};

struct ExperimentConfig {
  std::string kind;
  SpaceSpec space;
  std::optional<BodySpec> body;
  /// Numeric parameters by name (r, k, n, eps, theta, sigma, m0, C, dt, ds, tau, c, ...).
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string output;        // file stem for run outputs; defaults to the config file stem
  std::string profile_path;  // coarse-check: optional profile file

  double param(const std::string& name) const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the INI form. Throws ParameterError on unknown kinds, unknown
/// parameter names, malformed numbers or parameters outside preconditions.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);
/// Writes the INI form; parse_config(write_config(c)) == c.
void write_config(std::ostream& out, const ExperimentConfig& config);

/// Defaults for one experiment kind, as listed in the catalog.
ExperimentConfig default_config(const std::string& kind);

/// Throws ParameterError if a parameter violates the kind's preconditions.
void check_config(const ExperimentConfig& config);

struct CatalogEntry {
  std::string kind;
  std::string description;
  std::string anchor;      // statement being reproduced
  std::string reproduces;  // what the experiment measures against it
  std::string default_space;
  std::map<std::string, double> defaults;
};

const std::vector<CatalogEntry>& experiment_catalog();
/// Machine-readable catalog as JSON.
std::string catalog_json();

/// One CSV row in the fixed column order.
struct CsvRow {
  std::string experiment;
  std::string space;
  double r = 0.0;
  double k = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::string extra1_name;
  double extra1_value = 0.0;
  std::string extra2_name;
  double extra2_value = 0.0;
  bool pass = true;
};

struct Check {
  std::string description;
  bool pass = true;
};

struct Report {
  ExperimentConfig config;
  std::string digest;
  std::vector<CsvRow> rows;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool passed() const;
};

inline constexpr const char* kCsvHeader =
    "experiment,space,r,k,n,seed,mean,std_error,extra1_name,extra1_value,extra2_name,extra2_value,pass";

/// Runs the configured experiment. Parameter errors propagate as
/// ParameterError; invariant failures are reported through Report::checks.
Report run_experiment(const ExperimentConfig& config);

std::string to_csv(const Report& report);
std::string to_summary(const Report& report);

/// Writes `contents` to a sibling temporary file and renames it into place.
/// Throws std::runtime_error on I/O failure.
void write_atomically(const std::string& path, const std::string& contents);

/// Exit statuses of the command-line runner.
enum ExitCode : int { exit_ok = 0, exit_config_error = 2, exit_invariant_failure = 3, exit_io_error = 4 };

/// Seed actually used: explicit override, then the STATHYP_SEED environment
/// variable, then the config value.
std::uint64_t effective_seed(const ExperimentConfig& config, std::optional<std::uint64_t> override_seed);

}  // namespace stathyp
