#pragma once

#include <staleperc/engine.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace staleperc {

/// A run configuration plus the sweep grid and output location.
///
/// On disk this is an INI file with sections [run], [dataset], [staleness],
/// [schedule], [noise], [sweep] and [output]; every key is optional and falls
/// back to the defaults below.
struct ExperimentConfig {
  RunConfig run;
  std::string schedule_script;  // scripted schedule file, when kind = scripted
  std::vector<StalenessProfile> sweep_profiles;
  std::vector<double> sweep_noise_energies;
  std::vector<std::int64_t> sweep_horizons;
  double dl_fraction = 0.5;  // share of V assigned to the downlink in sweeps
  std::string output_dir = "out";

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

/// Defaults: D=10, m=8, 25 examples/client, margin 0.1, radius 1,
/// tau_dl = tau_ul = 1, alpha = (0.5, 0.3, 0.2), Bernoulli participation 0.5
/// with fresh probability 0.5, noiseless, uniform weighting, A = 1000.
ExperimentConfig default_experiment_config();

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig read_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const ExperimentConfig& config);
void write_config(const std::filesystem::path& path, const ExperimentConfig& config);

/// Loads the scripted schedule (if any) into the run config and validates
/// the sweep grid. Relative script paths resolve against `base_dir`.
RunConfig resolve_run_config(const ExperimentConfig& config, const std::filesystem::path& base_dir = {});

}  // namespace staleperc
