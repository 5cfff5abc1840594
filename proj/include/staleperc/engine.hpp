#pragma once

#include <staleperc/aggregator.hpp>
#include <staleperc/bounds.hpp>
#include <staleperc/channel.hpp>
#include <staleperc/dataset.hpp>
#include <staleperc/perceptron.hpp>
#include <staleperc/profile.hpp>
#include <staleperc/scheduler.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace staleperc {

/// Everything one simulated run depends on. The staleness bounds live in the
/// schedule policy; the profile must cover exactly tau_dl + tau_ul + 1 buckets.
struct RunConfig {
  GenerateOptions data;
  std::string dataset_path;  // overrides `data` when nonempty
  StalenessProfile profile;
  SchedulePolicy schedule;
  NoiseModel noise;
  WeightingMode weighting = WeightingMode::kUniform;
  int local_epochs = 1;
  std::int64_t horizon = 100;
  std::uint64_t seed = 1;
  std::size_t replicas = 1;
  std::vector<std::int64_t> checkpoints;  // empty: {A/16, A/8, A/4, A/2, A}
  bool record_iterates = false;

  int tau() const { return schedule.tau(); }
};

/// Throws ConfigError when the profile length disagrees with the staleness
/// bounds, or any component is invalid for `num_clients` clients.
void validate(const RunConfig& config, std::size_t num_clients);

/// Sorted, deduplicated checkpoint horizons within 1..horizon.
std::vector<std::int64_t> resolved_checkpoints(const RunConfig& config);

/// Generates or reads the dataset the config points at.
Dataset load_dataset(const RunConfig& config);

struct RoundRecord {
  std::int64_t t = 0;
  std::vector<ArrivalEvent> arrivals;
  std::vector<std::int64_t> mistakes;  // k per arrival
  std::vector<char> lemma1_ok;         // per arrival
  WeightAssignment assignment;
  double kappa = 0.0;  // sum_i mu_i k_i
  double a = 0.0;      // <w*, w_t>
  double b = 0.0;      // |w_t|^2
  bool correct = false;
};

struct StopTimes {
  std::optional<std::int64_t> hit;
  std::optional<std::int64_t> stab;  // set only when certified
};

struct RunTrace {
  RunConfig config;
  Certificate certificate;
  std::vector<RoundRecord> rounds;       // t = 0..A-1
  std::vector<double> K;                 // K[t] = sum_{r<t} kappa_r, t = 0..A
  std::vector<double> a, b;              // w_0..w_A
  std::vector<char> correct;             // w_0..w_A
  std::vector<double> phi, psi;          // potentials, t = 0..A
  std::vector<VectorXd> iterates;        // w_0..w_A when record_iterates
  StopTimes stop;

  std::int64_t horizon() const { return static_cast<std::int64_t>(rounds.size()); }
};

/// Drives the server rounds of one replica. Owns the server state, the
/// scheduler and the per-client example orders.
class Simulation {
 public:
  Simulation(const Dataset& dataset, RunConfig config);

  /// Executes server round t = state().round() and returns its record.
  RoundRecord run_round();

  const ServerState& state() const { return state_; }
  const RunConfig& config() const { return config_; }

 private:
  const Dataset& dataset_;
  RunConfig config_;
  Scheduler scheduler_;
  ServerState state_;
  std::vector<std::vector<std::size_t>> orders_;
};

/// Runs config.horizon rounds with config.seed. Deterministic in (dataset, config).
RunTrace run(const Dataset& dataset, const RunConfig& config);
RunTrace run(const RunConfig& config);

/// Phi_t = sum_j c_j a_{t-j} and Psi_t = sum_j c_j b_{t-j}, negative indices 0.
struct Potentials {
  std::vector<double> phi;
  std::vector<double> psi;
};
Potentials compute_potentials(const std::vector<double>& a, const std::vector<double>& b,
                              const StalenessProfile& profile);

/// Rounds t where Phi_{t+1} >= Phi_t + margin kappa_t or
/// Psi_{t+1} <= Psi_t + radius^2 kappa_t fails. Requires a noiseless trace.
std::vector<std::int64_t> check_one_step_noiseless(const RunTrace& trace, double margin, double radius);

/// Horizons A in 1..horizon where K_A > S R^2 / gamma^2 (relative tol 1e-9).
std::vector<std::int64_t> check_noiseless_bound(const RunTrace& trace);

/// Rounds r that are incorrect although some earlier window of tau+1
/// consecutive rounds was entirely correct.
std::vector<std::int64_t> check_window_permanence(const RunTrace& trace);

/// Number of (client, round) local runs whose pathwise progress/norm
/// inequalities failed, and the number checked.
struct Lemma1Tally {
  std::size_t checked = 0;
  std::size_t failed = 0;
};
Lemma1Tally tally_lemma1(const RunTrace& trace);

/// T_hit and certified T_stab over w_0..w_upto. T_stab is certified when the
/// final run of correct rounds spans at least tau+1 rounds and the links are
/// noiseless.
StopTimes extract_stop_times(const std::vector<char>& correct, std::int64_t upto, int tau, bool noiseless);
StopTimes extract_stop_times(const RunTrace& trace);

/// Per-round one-step drift residuals, averaged over rounds 0..upto-1:
/// progress: a_{t+1} - sum_s alpha_s a_{t-s} - gamma kappa_t (>= 0 in mean)
/// norm: sum_s alpha_s b_{t-s} + R^2 kappa_t + V - b_{t+1} (>= 0 in mean)
struct Lemma2Residuals {
  double progress = 0.0;
  double norm = 0.0;
};
Lemma2Residuals lemma2_residuals(const RunTrace& trace, std::int64_t upto);

// CSV columns: t,n_arrivals,kappa,K_t,a_t,b_t,phi_t,psi_t,correct
// (K_t counts rounds before t).
void write_trace_csv(std::ostream& out, const RunTrace& trace);

}  // namespace staleperc
