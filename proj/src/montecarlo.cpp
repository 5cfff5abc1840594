#include <staleperc/montecarlo.hpp>

#include <staleperc/csv.hpp>
#include <staleperc/random.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace staleperc {

std::uint64_t replica_seed(std::uint64_t base, std::size_t replica) {
  if (replica == 0) return base;
  return derive_seed(base, Purpose::kReplica, {static_cast<std::int64_t>(replica)});
}

ReplicaResult evaluate_replica(const RunTrace& trace, const std::vector<std::int64_t>& checkpoints) {
  ReplicaResult r;
  const bool noiseless = trace.config.noise.noiseless();
  for (auto A : checkpoints) {
    r.K_at.push_back(trace.K.at(static_cast<std::size_t>(A)));
    r.stops_at.push_back(extract_stop_times(trace.correct, A, trace.config.tau(), noiseless));
  }
  r.residuals = lemma2_residuals(trace, trace.horizon());
  r.lemma1 = tally_lemma1(trace);
  if (noiseless) {
    r.bound_violations = check_noiseless_bound(trace);
    r.potential_violations = check_one_step_noiseless(trace, trace.certificate.margin, trace.certificate.radius);
    r.window_violations = check_window_permanence(trace);
  }
  return r;
}

Estimate estimate(const std::vector<double>& samples) {
  Estimate e;
  e.count = samples.size();
  if (samples.empty()) {
    e.mean = std::nan("");
    return e;
  }
  double sum = 0.0;
  for (double x : samples) sum += x;
  e.mean = sum / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - e.mean) * (x - e.mean);
    const double var = ss / static_cast<double>(samples.size() - 1);
    e.se = std::sqrt(var / static_cast<double>(samples.size()));
  }
  return e;
}

MonteCarloSummary monte_carlo(const Dataset& dataset, const RunConfig& config, std::size_t reps, std::size_t jobs,
                              bool keep_first_trace) {
  if (reps < 1) throw ContractError("monte_carlo: reps must be >= 1");
  validate(config, dataset.num_clients());
  const auto checkpoints = resolved_checkpoints(config);

  std::vector<ReplicaResult> results(reps);
  std::optional<RunTrace> first;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        RunConfig rc = config;
        rc.seed = replica_seed(config.seed, r);
        RunTrace trace = run(dataset, rc);
        results[r] = evaluate_replica(trace, checkpoints);
        if (r == 0 && keep_first_trace) first = std::move(trace);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, reps));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  MonteCarloSummary s;
  s.config = config;
  s.certificate = dataset.certificate();
  s.replicas = reps;
  s.first_trace = std::move(first);

  const double V = noise_energy(config.noise);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    CheckpointSummary cs;
    cs.horizon = checkpoints[c];
    cs.replicas = reps;
    cs.bound_thm1 = theorem1_bound(config.profile.S(), s.certificate.radius, s.certificate.margin, cs.horizon, V);
    std::vector<double> K, hit, stab;
    for (const auto& r : results) {
      K.push_back(r.K_at[c]);
      const auto& st = r.stops_at[c];
      if (st.hit) hit.push_back(static_cast<double>(*st.hit)); else ++cs.hit_censored;
      if (st.stab) stab.push_back(static_cast<double>(*st.stab)); else ++cs.stab_censored;
    }
    cs.K = estimate(K);
    cs.hit = estimate(hit);
    cs.stab = estimate(stab);
    s.checkpoints.push_back(cs);
  }

  std::vector<double> progress, norm;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto& res = results[r];
    progress.push_back(res.residuals.progress);
    norm.push_back(res.residuals.norm);
    s.lemma1.checked += res.lemma1.checked;
    s.lemma1.failed += res.lemma1.failed;
    for (auto t : res.bound_violations) s.bound_violations.emplace_back(r, t);
    for (auto t : res.potential_violations) s.potential_violations.emplace_back(r, t);
    for (auto t : res.window_violations) s.window_violations.emplace_back(r, t);
  }
  s.progress_residual = estimate(progress);
  s.norm_residual = estimate(norm);
  return s;
}

void write_summary_csv(std::ostream& out, const MonteCarloSummary& summary) {
  CsvWriter csv(out);
  csv.header({"A", "mean_KA", "se_KA", "bound_thm1", "mean_Thit", "mean_Tstab", "censored_frac"});
  for (const auto& c : summary.checkpoints) {
    csv.field(static_cast<long long>(c.horizon))
        .field(c.K.mean)
        .field(c.K.se)
        .field(c.bound_thm1)
        .field(c.hit.mean)
        .field(c.stab.mean)
        .field(c.censored_fraction());
    csv.end_row();
  }
}

}  // namespace staleperc
