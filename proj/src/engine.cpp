#include <staleperc/engine.hpp>

#include <staleperc/csv.hpp>
#include <staleperc/random.hpp>

#include <algorithm>
#include <ostream>

namespace staleperc {

void validate(const RunConfig& config, std::size_t num_clients) {
  validate(config.schedule, num_clients);
  validate(config.noise);
  if (config.profile.tau() != config.tau()) {
    throw ConfigError("profile has " + std::to_string(config.profile.alpha().size()) +
                      " weights but tau_dl + tau_ul + 1 = " + std::to_string(config.tau() + 1));
  }
  if (config.horizon < 0) throw ConfigError("horizon must be nonnegative");
  if (config.local_epochs < 1) throw ConfigError("local_epochs must be >= 1");
  if (config.replicas < 1) throw ConfigError("replicas must be >= 1");
  if (config.weighting == WeightingMode::kFreshMistakeAware && !config.noise.noiseless()) {
    throw ConfigError("fresh_mistake_aware weighting requires noiseless links");
  }
  for (auto c : config.checkpoints) {
    if (c < 1 || c > config.horizon) throw ConfigError("checkpoint outside 1..horizon");
  }
}

std::vector<std::int64_t> resolved_checkpoints(const RunConfig& config) {
  std::vector<std::int64_t> out;
  const std::int64_t A = config.horizon;
  if (A <= 0) return out;
  if (config.checkpoints.empty()) {
    for (std::int64_t d : {16, 8, 4, 2, 1}) out.push_back(std::max<std::int64_t>(1, A / d));
  } else {
    out = config.checkpoints;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Dataset load_dataset(const RunConfig& config) {
  if (!config.dataset_path.empty()) return read_dataset(std::filesystem::path(config.dataset_path));
  return generate_dataset(config.data);
}

Simulation::Simulation(const Dataset& dataset, RunConfig config)
    : dataset_(dataset),
      config_(std::move(config)),
      scheduler_(config_.schedule, dataset.num_clients(), config_.seed),
      state_(dataset.dim(), config_.tau()) {
  validate(config_, dataset_.num_clients());
  orders_.reserve(dataset_.num_clients());
  for (std::size_t i = 0; i < dataset_.num_clients(); ++i) {
    const auto seed = derive_seed(config_.data.seed, Purpose::kOrder, {static_cast<std::int64_t>(i)});
    orders_.push_back(make_order(dataset_.client(i).size(), seed));
  }
}

RoundRecord Simulation::run_round() {
  const std::int64_t t = state_.round();
  const auto D = dataset_.dim();
  const double margin = dataset_.certified_margin();
  const double radius = dataset_.certified_radius();
  const NoiseModel& noise = config_.noise;

  RoundRecord rec;
  rec.t = t;
  rec.a = dataset_.witness().dot(state_.current());
  rec.b = state_.current().squaredNorm();
  rec.correct = is_globally_correct(state_.current(), dataset_);
  rec.arrivals = scheduler_.next_arrivals(t);

  const std::size_t n = rec.arrivals.size();
  std::vector<VectorXd> received;
  received.reserve(n);
  rec.mistakes.reserve(n);
  rec.lemma1_ok.reserve(n);
  for (const ArrivalEvent& e : rec.arrivals) {
    const auto client = static_cast<std::int64_t>(e.client);
    const VectorXd& stale = state_.iterate(e.total_staleness());

    SplitMix64 dl = make_stream(config_.seed, Purpose::kDownlink, {client, t, e.start_round()});
    const VectorXd delta = draw_noise(D, noise.sigma2_dl, noise.family, dl);

    LocalResult local = local_train(stale + delta, dataset_.client(e.client), orders_[e.client], config_.local_epochs);
    rec.lemma1_ok.push_back(check_lemma1(local, stale, delta, dataset_.witness(), margin, radius) ? 1 : 0);
    rec.mistakes.push_back(local.mistakes);

    SplitMix64 ul = make_stream(config_.seed, Purpose::kUplink, {client, t, e.start_round()});
    received.push_back(perturb<double>(local.w_out, noise.sigma2_ul, noise.family, ul));
  }

  const Buckets buckets = bucketize(rec.arrivals, config_.tau());
  rec.assignment = assign_weights(buckets, config_.profile, config_.weighting, rec.mistakes, noise.noiseless());
  for (std::size_t i = 0; i < n; ++i) rec.kappa += rec.assignment.mu[i] * static_cast<double>(rec.mistakes[i]);

  state_ = server_step(std::move(state_), std::span<const VectorXd>(received), rec.assignment);
  return rec;
}

Potentials compute_potentials(const std::vector<double>& a, const std::vector<double>& b,
                              const StalenessProfile& profile) {
  if (a.size() != b.size()) throw ContractError("compute_potentials: series lengths differ");
  const auto& c = profile.tails();
  Potentials p;
  p.phi.assign(a.size(), 0.0);
  p.psi.assign(b.size(), 0.0);
  for (std::size_t t = 0; t < a.size(); ++t) {
    for (std::size_t j = 0; j < c.size() && j <= t; ++j) {
      p.phi[t] += c[j] * a[t - j];
      p.psi[t] += c[j] * b[t - j];
    }
  }
  return p;
}

RunTrace run(const Dataset& dataset, const RunConfig& config) {
  Simulation sim(dataset, config);
  RunTrace trace;
  trace.config = config;
  trace.certificate = dataset.certificate();
  const auto A = static_cast<std::size_t>(config.horizon);
  trace.rounds.reserve(A);
  trace.K.assign(1, 0.0);
  if (config.record_iterates) trace.iterates.push_back(sim.state().current());

  for (std::size_t t = 0; t < A; ++t) {
    RoundRecord rec = sim.run_round();
    trace.K.push_back(trace.K.back() + rec.kappa);
    trace.a.push_back(rec.a);
    trace.b.push_back(rec.b);
    trace.correct.push_back(rec.correct ? 1 : 0);
    trace.rounds.push_back(std::move(rec));
    if (config.record_iterates) trace.iterates.push_back(sim.state().current());
  }
  const VectorXd& last = sim.state().current();
  trace.a.push_back(dataset.witness().dot(last));
  trace.b.push_back(last.squaredNorm());
  trace.correct.push_back(is_globally_correct(last, dataset) ? 1 : 0);

  Potentials pot = compute_potentials(trace.a, trace.b, config.profile);
  trace.phi = std::move(pot.phi);
  trace.psi = std::move(pot.psi);
  trace.stop = extract_stop_times(trace);
  return trace;
}

RunTrace run(const RunConfig& config) {
  const Dataset dataset = load_dataset(config);
  return run(dataset, config);
}

std::vector<std::int64_t> check_one_step_noiseless(const RunTrace& trace, double margin, double radius) {
  if (!trace.config.noise.noiseless()) {
    throw ContractError("check_one_step_noiseless: trace has noisy links");
  }
  std::vector<std::int64_t> bad;
  for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
    const double kappa = trace.rounds[t].kappa;
    const bool progress = approx_ge(trace.phi[t + 1], trace.phi[t] + margin * kappa);
    const bool norm = approx_ge(trace.psi[t] + radius * radius * kappa, trace.psi[t + 1]);
    if (!progress || !norm) bad.push_back(static_cast<std::int64_t>(t));
  }
  return bad;
}

std::vector<std::int64_t> check_noiseless_bound(const RunTrace& trace) {
  const double g = trace.certificate.margin;
  const double R = trace.certificate.radius;
  const double bound = theorem1_bound(trace.config.profile.S(), R, g, 0, 0.0);
  std::vector<std::int64_t> bad;
  for (std::size_t A = 1; A < trace.K.size(); ++A) {
    if (trace.K[A] > bound * (1.0 + 1e-9)) bad.push_back(static_cast<std::int64_t>(A));
  }
  return bad;
}

std::vector<std::int64_t> check_window_permanence(const RunTrace& trace) {
  const std::size_t window = static_cast<std::size_t>(trace.config.tau()) + 1;
  std::vector<std::int64_t> bad;
  std::size_t run_length = 0;
  bool armed = false;
  for (std::size_t t = 0; t < trace.correct.size(); ++t) {
    if (trace.correct[t]) {
      if (++run_length >= window) armed = true;
    } else {
      run_length = 0;
      if (armed) bad.push_back(static_cast<std::int64_t>(t));
    }
  }
  return bad;
}

Lemma1Tally tally_lemma1(const RunTrace& trace) {
  Lemma1Tally tally;
  for (const auto& rec : trace.rounds) {
    for (char ok : rec.lemma1_ok) {
      ++tally.checked;
      if (!ok) ++tally.failed;
    }
  }
  return tally;
}

StopTimes extract_stop_times(const std::vector<char>& correct, std::int64_t upto, int tau, bool noiseless) {
  StopTimes st;
  const auto last = std::min<std::int64_t>(upto, static_cast<std::int64_t>(correct.size()) - 1);
  if (last < 0) return st;
  for (std::int64_t t = 0; t <= last; ++t) {
    if (correct[static_cast<std::size_t>(t)]) {
      st.hit = t;
      break;
    }
  }
  if (!noiseless || !correct[static_cast<std::size_t>(last)]) return st;
  std::int64_t start = last;
  while (start > 0 && correct[static_cast<std::size_t>(start - 1)]) --start;
  if (last - start + 1 >= static_cast<std::int64_t>(tau) + 1) st.stab = start;
  return st;
}

StopTimes extract_stop_times(const RunTrace& trace) {
  return extract_stop_times(trace.correct, trace.horizon(), trace.config.tau(), trace.config.noise.noiseless());
}

Lemma2Residuals lemma2_residuals(const RunTrace& trace, std::int64_t upto) {
  Lemma2Residuals r;
  const auto n = std::min<std::int64_t>(upto, trace.horizon());
  if (n <= 0) return r;
  const auto& alpha = trace.config.profile.alpha();
  const double g = trace.certificate.margin;
  const double R2 = trace.certificate.radius * trace.certificate.radius;
  const double V = noise_energy(trace.config.noise);
  for (std::int64_t t = 0; t < n; ++t) {
    double mix_a = 0.0;
    double mix_b = 0.0;
    for (std::size_t s = 0; s < alpha.size(); ++s) {
      const std::int64_t idx = t - static_cast<std::int64_t>(s);
      if (idx < 0) continue;
      mix_a += alpha[s] * trace.a[static_cast<std::size_t>(idx)];
      mix_b += alpha[s] * trace.b[static_cast<std::size_t>(idx)];
    }
    const double kappa = trace.rounds[static_cast<std::size_t>(t)].kappa;
    const auto next = static_cast<std::size_t>(t + 1);
    r.progress += trace.a[next] - mix_a - g * kappa;
    r.norm += mix_b + R2 * kappa + V - trace.b[next];
  }
  r.progress /= static_cast<double>(n);
  r.norm /= static_cast<double>(n);
  return r;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  CsvWriter csv(out);
  csv.header({"t", "n_arrivals", "kappa", "K_t", "a_t", "b_t", "phi_t", "psi_t", "correct"});
  for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
    const auto& rec = trace.rounds[t];
    csv.field(static_cast<long long>(rec.t))
        .field(rec.arrivals.size())
        .field(rec.kappa)
        .field(trace.K[t])
        .field(trace.a[t])
        .field(trace.b[t])
        .field(trace.phi[t])
        .field(trace.psi[t])
        .field(rec.correct ? 1 : 0);
    csv.end_row();
  }
}

}  // namespace staleperc
