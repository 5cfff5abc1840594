#pragma once

#include <staleperc/config.hpp>
#include <staleperc/montecarlo.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace staleperc {

enum class VerdictKind { kPathwise, kStatistical };

struct Verdict {
  std::string name;
  VerdictKind kind = VerdictKind::kPathwise;
  bool pass = true;
  bool skipped = false;
  std::string detail;
};

/// Pathwise checks (local progress/norm, noiseless bound, one-step potentials, window
/// permanence) and statistical checks (expected bound, drift residual signs,
/// stabilization bounds, vanishing mistake rate). Statistical checks are
/// skipped with fewer than two replicas.
std::vector<Verdict> evaluate_verdicts(const MonteCarloSummary& summary);

/// One line per verdict: `PASS|FAIL|SKIP  name  detail`.
void print_verdicts(std::ostream& out, const std::vector<Verdict>& verdicts);

/// Copy of `trace` with kappa at `round` inflated by `amount`.
RunTrace inject_corruption(const RunTrace& trace, std::int64_t round, double amount = 1.0);

/// Last round with kappa = 0, where a unit inflation of kappa is always
/// detectable by the one-step check. -1 when none exists.
std::int64_t quiet_round(const RunTrace& trace);

struct SweepRow {
  std::string profile;  // weights joined with ';'
  double s_bar = 0.0;
  double V = 0.0;
  std::int64_t horizon = 0;
  double mean_K = 0.0;
  double se_K = 0.0;
  double bound_thm1 = 0.0;
};

/// Noise model with total energy V split by `dl_fraction`. V = 0 yields a
/// noiseless model; otherwise the base family is kept (gaussian if none).
NoiseModel noise_with_energy(const NoiseModel& base, double V, double dl_fraction);

/// Runs the (profile x V) grid; one row per checkpoint horizon of each cell.
std::vector<SweepRow> sweep(const Dataset& dataset, const ExperimentConfig& config, const RunConfig& base,
                            std::size_t jobs);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace staleperc
