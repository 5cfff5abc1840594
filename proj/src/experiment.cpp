#include <staleperc/experiment.hpp>

#include <staleperc/csv.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

namespace staleperc {

namespace {

template <typename Pairs>
std::string describe(const Pairs& violations, const char* what) {
  std::ostringstream os;
  os << violations.size() << ' ' << what;
  std::size_t shown = 0;
  for (const auto& [rep, t] : violations) {
    os << (shown == 0 ? " at " : ", ") << "replica " << rep << " round " << t;
    if (++shown == 5) {
      if (violations.size() > shown) os << ", ...";
      break;
    }
  }
  return os.str();
}

Verdict pathwise(std::string name, bool pass, std::string detail) {
  return {std::move(name), VerdictKind::kPathwise, pass, false, std::move(detail)};
}

Verdict statistical(std::string name, bool pass, std::string detail) {
  return {std::move(name), VerdictKind::kStatistical, pass, false, std::move(detail)};
}

Verdict skipped(std::string name, std::string why) {
  return {std::move(name), VerdictKind::kStatistical, true, true, std::move(why)};
}

}  // namespace

std::vector<Verdict> evaluate_verdicts(const MonteCarloSummary& s) {
  std::vector<Verdict> out;
  const RunConfig& cfg = s.config;
  const bool noiseless = cfg.noise.noiseless();

  out.push_back(pathwise("local_progress_pathwise", s.lemma1.failed == 0,
                         std::to_string(s.lemma1.failed) + " of " + std::to_string(s.lemma1.checked) +
                             " local runs violate the progress/norm inequalities"));
  if (noiseless) {
    out.push_back(pathwise("noiseless_bound", s.bound_violations.empty(),
                           describe(s.bound_violations, "horizons exceed S R^2/gamma^2")));
    out.push_back(pathwise("one_step_potentials", s.potential_violations.empty(),
                           describe(s.potential_violations, "one-step potential violations")));
    out.push_back(pathwise("window_permanence", s.window_violations.empty(),
                           describe(s.window_violations, "incorrect rounds after a correct window")));
  }

  if (s.replicas < 2) {
    out.push_back(skipped("expected_mistake_bound", "needs >= 2 replicas"));
    out.push_back(skipped("drift_residuals", "needs >= 2 replicas"));
    return out;
  }

  {
    bool pass = true;
    std::ostringstream os;
    for (const auto& c : s.checkpoints) {
      const double lhs = c.K.mean - 2.0 * c.K.se;
      const bool ok = lhs <= c.bound_thm1;
      pass = pass && ok;
      if (&c != &s.checkpoints.front()) os << "; ";
      os << "A=" << c.horizon << " mean=" << format_real(c.K.mean) << " se=" << format_real(c.K.se)
         << " CI95=[" << format_real(c.K.ci_low()) << ',' << format_real(c.K.ci_high()) << "] bound="
         << format_real(c.bound_thm1) << (ok ? "" : " (violated)");
    }
    out.push_back(statistical("expected_mistake_bound", pass, os.str()));
  }
  {
    const auto& p = s.progress_residual;
    const auto& n = s.norm_residual;
    const bool pass = p.mean >= -3.0 * p.se && n.mean >= -3.0 * n.se;
    out.push_back(statistical("drift_residuals", pass,
                              "progress mean=" + format_real(p.mean) + " se=" + format_real(p.se) +
                                  "; norm mean=" + format_real(n.mean) + " se=" + format_real(n.se)));
  }
  if (!noiseless && s.checkpoints.size() >= 2) {
    const auto& first = s.checkpoints.front();
    const auto& last = s.checkpoints.back();
    const double r0 = first.K.mean / static_cast<double>(first.horizon);
    const double r1 = last.K.mean / static_cast<double>(last.horizon);
    out.push_back(statistical("vanishing_rate", r1 < r0,
                              "K_A/A: " + format_real(r0) + " at A=" + std::to_string(first.horizon) + " -> " +
                                  format_real(r1) + " at A=" + std::to_string(last.horizon)));
  }
  if (noiseless && cfg.weighting == WeightingMode::kFreshMistakeAware && cfg.profile.alpha(0) > 0.0 &&
      !s.checkpoints.empty()) {
    double p_min = 0.0;
    try {
      p_min = lower_bound_fresh_prob(cfg.schedule);
    } catch (const ContractError& e) {
      out.push_back(skipped("stabilization_time", e.what()));
      return out;
    }
    if (p_min <= 0.0) {
      out.push_back(skipped("stabilization_time", "p_min = 0"));
      return out;
    }
    const auto bounds = theorem2_bounds(cfg.profile.S(), s.certificate.radius, s.certificate.margin,
                                        cfg.profile.alpha(0), p_min, cfg.tau());
    const auto& c = s.checkpoints.back();
    const bool long_enough = static_cast<double>(c.horizon) >= 10.0 * bounds.hit;
    const bool censor_ok = !long_enough || c.censored_fraction() <= 0.01;
    const bool pass = c.hit.count > 0 && c.hit.mean <= bounds.hit && c.stab.count > 0 &&
                      c.stab.mean <= bounds.stab && censor_ok;
    out.push_back(statistical(
        "stabilization_time", pass,
        "mean T_hit=" + format_real(c.hit.mean) + " (bound " + format_real(bounds.hit) + "), mean T_stab=" +
            format_real(c.stab.mean) + " (bound " + format_real(bounds.stab) + "), censored " +
            std::to_string(c.stab_censored) + "/" + std::to_string(c.replicas) +
            (long_enough ? "" : " (horizon below 10x bound; censoring not gated)")));
  }
  return out;
}

void print_verdicts(std::ostream& out, const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts) {
    out << (v.skipped ? "SKIP" : (v.pass ? "PASS" : "FAIL")) << "  " << v.name << "  " << v.detail << '\n';
  }
}

RunTrace inject_corruption(const RunTrace& trace, std::int64_t round, double amount) {
  if (round < 0 || round >= trace.horizon()) throw ContractError("inject_corruption: round outside the trace");
  RunTrace out = trace;
  out.rounds[static_cast<std::size_t>(round)].kappa += amount;
  return out;
}

std::int64_t quiet_round(const RunTrace& trace) {
  for (std::int64_t t = trace.horizon() - 1; t >= 0; --t) {
    if (trace.rounds[static_cast<std::size_t>(t)].kappa == 0.0) return t;
  }
  return -1;
}

NoiseModel noise_with_energy(const NoiseModel& base, double V, double dl_fraction) {
  NoiseModel n;
  if (V == 0.0) return n;
  n.family = base.family == NoiseFamily::kNone ? NoiseFamily::kGaussianIsotropic : base.family;
  n.sigma2_dl = V * dl_fraction;
  n.sigma2_ul = V - n.sigma2_dl;
  return n;
}

std::vector<SweepRow> sweep(const Dataset& dataset, const ExperimentConfig& config, const RunConfig& base,
                            std::size_t jobs) {
  std::vector<StalenessProfile> profiles = config.sweep_profiles;
  if (profiles.empty()) profiles.push_back(base.profile);
  std::vector<double> energies = config.sweep_noise_energies;
  if (energies.empty()) energies.push_back(noise_energy(base.noise));

  RunConfig cell = base;
  if (!config.sweep_horizons.empty()) {
    cell.checkpoints = config.sweep_horizons;
    cell.horizon = *std::max_element(cell.checkpoints.begin(), cell.checkpoints.end());
  }

  std::vector<SweepRow> rows;
  for (const auto& profile : profiles) {
    for (double V : energies) {
      cell.profile = profile;
      if (V != noise_energy(base.noise)) cell.noise = noise_with_energy(base.noise, V, config.dl_fraction);
      else cell.noise = base.noise;
      if (!cell.noise.noiseless() && cell.weighting == WeightingMode::kFreshMistakeAware) {
        throw ConfigError("sweep: fresh_mistake_aware weighting cannot be combined with V > 0");
      }
      const auto summary = monte_carlo(dataset, cell, cell.replicas, jobs, false);
      for (const auto& c : summary.checkpoints) {
        rows.push_back({format_profile(profile, ';'), profile.mean_staleness(), V, c.horizon, c.K.mean, c.K.se,
                        c.bound_thm1});
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  CsvWriter csv(out);
  csv.header({"profile", "s_bar", "V", "A", "mean_KA", "se_KA", "bound_thm1"});
  for (const auto& r : rows) {
    csv.field(std::string_view(r.profile))
        .field(r.s_bar)
        .field(r.V)
        .field(static_cast<long long>(r.horizon))
        .field(r.mean_K)
        .field(r.se_K)
        .field(r.bound_thm1);
    csv.end_row();
  }
}

}  // namespace staleperc
