// Command-line front end: gen-data, run, sweep, profile-design, self-test.
//
// Exit status: 0 all checks pass, 1 usage, 2 config error, 3 I/O error,
// 4 pathwise invariant violated, 5 statistical check failed.

#include <staleperc/config.hpp>
#include <staleperc/csv.hpp>
#include <staleperc/design.hpp>
#include <staleperc/experiment.hpp>
#include <staleperc/montecarlo.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace staleperc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitInvariant = 4;
constexpr int kExitStatistical = 5;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::size_t jobs = 1;
  std::optional<std::string> out;
};

struct Loaded {
  ExperimentConfig experiment;
  fs::path base_dir;
};

Loaded load(const GlobalOptions& g) {
  Loaded l;
  if (g.config_path.empty()) {
    l.experiment = default_experiment_config();
  } else {
    l.experiment = read_config(g.config_path);
    l.base_dir = fs::path(g.config_path).parent_path();
  }
  ExperimentConfig& c = l.experiment;
  if (const char* env = std::getenv("STALEPERC_SEED")) {
    try {
      c.run.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("STALEPERC_SEED is not an integer: ") + env);
    }
  }
  if (const char* env = std::getenv("STALEPERC_OUT")) c.output_dir = env;
  if (g.seed) c.run.seed = *g.seed;
  if (g.reps) c.run.replicas = *g.reps;
  if (g.out) c.output_dir = *g.out;
  if (c.run.replicas < 1) throw ConfigError("--reps must be >= 1");
  return l;
}

fs::path prepare_out(const ExperimentConfig& c) {
  fs::path out(c.output_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

int verdict_status(const std::vector<Verdict>& verdicts) {
  bool pathwise_fail = false;
  bool statistical_fail = false;
  for (const auto& v : verdicts) {
    if (v.skipped || v.pass) continue;
    (v.kind == VerdictKind::kPathwise ? pathwise_fail : statistical_fail) = true;
  }
  if (pathwise_fail) return kExitInvariant;
  if (statistical_fail) return kExitStatistical;
  return kExitOk;
}

int cmd_gen_data(const GlobalOptions& g, const std::string& output) {
  Loaded l = load(g);
  const auto& d = l.experiment.run.data;
  if (!(d.target_margin < d.radius)) throw ConfigError("dataset.margin must be smaller than dataset.radius");
  fs::path path = output.empty() ? prepare_out(l.experiment) / "dataset.txt" : fs::path(output);
  const Dataset ds = generate_dataset(d);
  write_dataset(path, ds);
  std::cout << "wrote " << path.string() << ": " << ds.total_size() << " examples, " << ds.num_clients()
            << " clients\n"
            << "certified margin " << format_real(ds.certified_margin()) << ", radius "
            << format_real(ds.certified_radius()) << '\n';
  return kExitOk;
}

int cmd_run(const GlobalOptions& g, std::optional<std::int64_t> inject) {
  Loaded l = load(g);
  const RunConfig rc = resolve_run_config(l.experiment, l.base_dir);
  const Dataset ds = load_dataset(rc);
  validate(rc, ds.num_clients());
  const fs::path out = prepare_out(l.experiment);
  write_config(out / "config.ini", l.experiment);

  MonteCarloSummary summary = monte_carlo(ds, rc, rc.replicas, g.jobs, true);
  RunTrace& trace = *summary.first_trace;

  if (inject) {
    if (!rc.noise.noiseless()) throw ConfigError("--inject-corruption needs a noiseless configuration");
    const std::int64_t round = *inject >= 0 ? *inject : quiet_round(trace);
    if (round < 0) throw ConfigError("no zero-mistake round available for corruption");
    trace = inject_corruption(trace, round);
    std::erase_if(summary.potential_violations, [](const auto& v) { return v.first == 0; });
    for (auto t : check_one_step_noiseless(trace, ds.certified_margin(), ds.certified_radius())) {
      summary.potential_violations.emplace_back(0, t);
    }
    std::cout << "injected kappa += 1 at replica 0 round " << round << '\n';
  }

  {
    auto f = open_out(out / "trace.csv");
    write_trace_csv(f, trace);
  }
  {
    auto f = open_out(out / "summary.csv");
    write_summary_csv(f, summary);
  }
  const auto verdicts = evaluate_verdicts(summary);
  {
    auto f = open_out(out / "verdicts.txt");
    print_verdicts(f, verdicts);
  }
  std::cout << "dataset: margin " << format_real(ds.certified_margin()) << ", radius "
            << format_real(ds.certified_radius()) << ", S = " << format_real(rc.profile.S()) << ", V = "
            << format_real(noise_energy(rc.noise)) << ", replicas " << rc.replicas << '\n';
  print_verdicts(std::cout, verdicts);
  return verdict_status(verdicts);
}

int cmd_sweep(const GlobalOptions& g) {
  Loaded l = load(g);
  const RunConfig rc = resolve_run_config(l.experiment, l.base_dir);
  const Dataset ds = load_dataset(rc);
  const fs::path out = prepare_out(l.experiment);
  write_config(out / "config.ini", l.experiment);
  const auto rows = sweep(ds, l.experiment, rc, g.jobs);
  auto f = open_out(out / "sweep.csv");
  write_sweep_csv(f, rows);
  std::cout << "wrote " << rows.size() << " rows to " << (out / "sweep.csv").string() << '\n';
  return kExitOk;
}

int cmd_profile_design(const GlobalOptions& g, const std::string& freq, double threshold, std::int64_t rounds) {
  std::vector<double> occupancy;
  if (!freq.empty()) {
    for (const auto& tok : split_trimmed(freq, ',')) occupancy.push_back(parse_real(tok));
  } else {
    Loaded l = load(g);
    const RunConfig rc = resolve_run_config(l.experiment, l.base_dir);
    occupancy = estimate_occupancy(rc.schedule, rc.data.num_clients, rounds, rc.seed);
    std::cout << "estimated occupancy over " << rounds << " rounds:";
    for (double f : occupancy) std::cout << ' ' << format_real(f);
    std::cout << '\n';
  }
  for (double f : occupancy) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("occupancy frequencies must lie in [0, 1]");
  }
  const ProfileDesign d = design_profile(occupancy, threshold);
  if (d.fallback) std::cerr << "warning: no bucket above threshold " << format_real(threshold)
                            << "; using the uniform profile\n";
  std::cout << "alpha = " << format_profile(d.profile) << '\n'
            << "s_bar = " << format_real(d.profile.mean_staleness()) << '\n';
  return kExitOk;
}

int cmd_self_test(const GlobalOptions& g) {
  ExperimentConfig c = default_experiment_config();
  RunConfig& rc = c.run;
  rc.data.dim = 4;
  rc.data.num_clients = 4;
  rc.data.examples_per_client = 10;
  rc.data.target_margin = 0.2;
  rc.horizon = 400;
  const Dataset ds = generate_dataset(rc.data);

  bool ok = true;
  auto report = [&](const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  " << detail << '\n';
    ok = ok && pass;
  };

  const RunTrace trace = run(ds, rc);
  const auto base = evaluate_verdicts(monte_carlo(ds, rc, 1, 1, false));
  report("baseline_pathwise", verdict_status(base) == kExitOk, "noiseless baseline checks");

  const std::int64_t round = quiet_round(trace);
  if (round < 0) {
    report("corruption_detected", false, "no zero-mistake round to corrupt");
  } else {
    const auto flagged = check_one_step_noiseless(inject_corruption(trace, round), ds.certified_margin(),
                                                  ds.certified_radius());
    report("corruption_detected", flagged == std::vector<std::int64_t>{round},
           "injected at round " + std::to_string(round) + ", flagged " + std::to_string(flagged.size()) +
               " round(s)" + (flagged.empty() ? "" : " first " + std::to_string(flagged.front())));
  }

  std::ostringstream a, b;
  write_trace_csv(a, trace);
  write_trace_csv(b, run(ds, rc));
  report("trace_determinism", a.str() == b.str(), "two runs, identical CSV bytes");

  std::ostringstream s1, s2;
  write_summary_csv(s1, monte_carlo(ds, rc, 6, 1, false));
  write_summary_csv(s2, monte_carlo(ds, rc, 6, std::max<std::size_t>(2, g.jobs), false));
  report("jobs_independence", s1.str() == s2.str(), "summary identical across job counts");

  return ok ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staleness-profile IPM perceptron simulator"};
  app.require_subcommand(1);

  GlobalOptions g;
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "Run seed (overrides config and STALEPERC_SEED)");
  auto* reps_opt = app.add_option("--reps", reps, "Monte Carlo replicas")->check(CLI::PositiveNumber);
  auto* out_opt = app.add_option("--out", out, "Output directory (overrides config and STALEPERC_OUT)");
  app.add_option("--config", g.config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--jobs", g.jobs, "Concurrent replicas")->check(CLI::PositiveNumber);
  app.fallthrough();

  auto* gen = app.add_subcommand("gen-data", "Generate and certify a separable dataset");
  std::string gen_output;
  gen->add_option("--output", gen_output, "Dataset file (default <out>/dataset.txt)");

  auto* run_cmd = app.add_subcommand("run", "Run replicas and check every invariant");
  std::int64_t inject_round = -1;
  auto* inject_opt = run_cmd->add_option(
      "--inject-corruption", inject_round,
      "Inflate kappa by 1 at this round of replica 0 (-1: last zero-mistake round)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run the profile x noise-energy grid");

  auto* design = app.add_subcommand("profile-design", "Pick the minimal-mean-staleness reliable profile");
  std::string freq;
  double threshold = 0.5;
  std::int64_t rounds = 10000;
  design->add_option("--freq", freq, "Comma-separated bucket occupancy frequencies");
  design->add_option("--threshold", threshold, "Reliability threshold");
  design->add_option("--rounds", rounds, "Rounds to simulate when estimating occupancy");

  auto* self_test = app.add_subcommand("self-test", "Built-in checker and determinism self-test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (*seed_opt) g.seed = seed;
  if (*reps_opt) g.reps = reps;
  if (*out_opt) g.out = out;

  try {
    if (*gen) return cmd_gen_data(g, gen_output);
    if (*run_cmd) {
      std::optional<std::int64_t> inject;
      if (*inject_opt) inject = inject_round;
      return cmd_run(g, inject);
    }
    if (*sweep_cmd) return cmd_sweep(g);
    if (*design) return cmd_profile_design(g, freq, threshold, rounds);
    if (*self_test) return cmd_self_test(g);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GenerationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ContractError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
