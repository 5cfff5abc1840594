#pragma once

#include <staleperc/engine.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace staleperc {

/// Seed of replica r: the base seed itself for r = 0, a hash otherwise.
std::uint64_t replica_seed(std::uint64_t base, std::size_t replica);

/// Everything kept from one replica once its trace is discarded.
struct ReplicaResult {
  std::vector<double> K_at;              // per checkpoint
  std::vector<StopTimes> stops_at;       // per checkpoint
  Lemma2Residuals residuals;             // over the full horizon
  Lemma1Tally lemma1;
  std::vector<std::int64_t> bound_violations;      // noiseless only
  std::vector<std::int64_t> potential_violations;  // noiseless only
  std::vector<std::int64_t> window_violations;     // noiseless only
};

/// Runs one replica and applies every pathwise checker to it.
ReplicaResult evaluate_replica(const RunTrace& trace, const std::vector<std::int64_t>& checkpoints);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;  // 0 when fewer than two samples
  std::size_t count = 0;

  double ci_low() const { return mean - 1.96 * se; }
  double ci_high() const { return mean + 1.96 * se; }
};

Estimate estimate(const std::vector<double>& samples);

struct CheckpointSummary {
  std::int64_t horizon = 0;
  Estimate K;
  double bound_thm1 = 0.0;
  Estimate hit;               // over replicas that reached T_hit
  Estimate stab;              // over replicas with certified T_stab
  std::size_t hit_censored = 0;
  std::size_t stab_censored = 0;
  std::size_t replicas = 0;

  double censored_fraction() const {
    return replicas == 0 ? 0.0 : static_cast<double>(stab_censored) / static_cast<double>(replicas);
  }
};

struct MonteCarloSummary {
  RunConfig config;
  Certificate certificate;
  std::size_t replicas = 0;
  std::vector<CheckpointSummary> checkpoints;
  Estimate progress_residual;
  Estimate norm_residual;
  Lemma1Tally lemma1;
  // (replica, round/horizon) pairs that failed a pathwise check.
  std::vector<std::pair<std::size_t, std::int64_t>> bound_violations;
  std::vector<std::pair<std::size_t, std::int64_t>> potential_violations;
  std::vector<std::pair<std::size_t, std::int64_t>> window_violations;
  std::optional<RunTrace> first_trace;  // replica 0, kept for export
};

/// Runs `reps` replicas on up to `jobs` threads. Results are merged by
/// replica index, so the summary does not depend on `jobs`.
MonteCarloSummary monte_carlo(const Dataset& dataset, const RunConfig& config, std::size_t reps,
                              std::size_t jobs = 1, bool keep_first_trace = true);

// CSV columns: A,mean_KA,se_KA,bound_thm1,mean_Thit,mean_Tstab,censored_frac
void write_summary_csv(std::ostream& out, const MonteCarloSummary& summary);

}  // namespace staleperc
