#include <staleperc/config.hpp>

#include <staleperc/csv.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <istream>
#include <ostream>

namespace staleperc {

namespace pt = boost::property_tree;

namespace {

std::string join_reals(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

std::string join_integers(const std::vector<std::int64_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& tok : split_trimmed(text, ',')) out.push_back(parse_real(tok));
  return out;
}

std::vector<std::int64_t> parse_integers(const std::string& text) {
  std::vector<std::int64_t> out;
  if (trim(text).empty()) return out;
  for (const auto& tok : split_trimmed(text, ',')) out.push_back(parse_integer(tok));
  return out;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("not a boolean: '" + t + "'");
}

std::uint64_t parse_seed(const std::string& text) {
  const std::string t = trim(text);
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(t, &pos, 10);
    if (pos != t.size()) throw ConfigError("bad seed '" + t + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad seed '" + t + "'");
  }
}

Partition parse_partition(const std::string& text) {
  if (text == "balanced") return Partition::kBalanced;
  if (text == "label_skewed") return Partition::kLabelSkewed;
  throw ConfigError("unknown partition '" + text + "'");
}

std::string to_string(Partition p) { return p == Partition::kBalanced ? "balanced" : "label_skewed"; }

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  template <typename Fn>
  void maybe(const char* key, Fn&& fn) {
    if (auto v = tree_.get_optional<std::string>(key)) {
      try {
        fn(trim(*v));
      } catch (const Error& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
      }
    }
  }

 private:
  const pt::ptree& tree_;
};

}  // namespace

ExperimentConfig default_experiment_config() {
  ExperimentConfig c;
  RunConfig& r = c.run;
  r.data.dim = 10;
  r.data.num_clients = 8;
  r.data.examples_per_client = 25;
  r.data.target_margin = 0.1;
  r.data.radius = 1.0;
  r.data.seed = 7;
  r.schedule.kind = ScheduleKind::kBernoulliUniform;
  r.schedule.tau_dl = 1;
  r.schedule.tau_ul = 1;
  r.schedule.participation_prob = 0.5;
  r.schedule.fresh_prob = 0.5;
  r.schedule.allow_multiple_inflight = false;
  r.profile = StalenessProfile({0.5, 0.3, 0.2});
  r.horizon = 1000;
  r.seed = 1;
  r.replicas = 1;
  return c;
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  ExperimentConfig c = default_experiment_config();
  RunConfig& r = c.run;
  Reader rd(tree);

  rd.maybe("run.horizon", [&](const std::string& v) { r.horizon = parse_integer(v); });
  rd.maybe("run.seed", [&](const std::string& v) { r.seed = parse_seed(v); });
  rd.maybe("run.replicas", [&](const std::string& v) {
    const auto n = parse_integer(v);
    if (n < 1) throw ConfigError("must be >= 1");
    r.replicas = static_cast<std::size_t>(n);
  });
  rd.maybe("run.weighting", [&](const std::string& v) { r.weighting = parse_weighting_mode(v); });
  rd.maybe("run.local_epochs", [&](const std::string& v) { r.local_epochs = static_cast<int>(parse_integer(v)); });
  rd.maybe("run.checkpoints", [&](const std::string& v) { r.checkpoints = parse_integers(v); });

  rd.maybe("dataset.path", [&](const std::string& v) { r.dataset_path = v; });
  rd.maybe("dataset.dim", [&](const std::string& v) { r.data.dim = parse_integer(v); });
  rd.maybe("dataset.clients", [&](const std::string& v) {
    const auto n = parse_integer(v);
    if (n < 1) throw ConfigError("must be >= 1");
    r.data.num_clients = static_cast<std::size_t>(n);
  });
  rd.maybe("dataset.examples_per_client", [&](const std::string& v) {
    const auto n = parse_integer(v);
    if (n < 1) throw ConfigError("must be >= 1");
    r.data.examples_per_client = static_cast<std::size_t>(n);
  });
  rd.maybe("dataset.margin", [&](const std::string& v) { r.data.target_margin = parse_real(v); });
  rd.maybe("dataset.radius", [&](const std::string& v) { r.data.radius = parse_real(v); });
  rd.maybe("dataset.seed", [&](const std::string& v) { r.data.seed = parse_seed(v); });
  rd.maybe("dataset.partition", [&](const std::string& v) { r.data.partition = parse_partition(v); });
  rd.maybe("dataset.attempt_budget", [&](const std::string& v) { r.data.attempt_budget = parse_seed(v); });

  rd.maybe("staleness.tau_dl", [&](const std::string& v) { r.schedule.tau_dl = static_cast<int>(parse_integer(v)); });
  rd.maybe("staleness.tau_ul", [&](const std::string& v) { r.schedule.tau_ul = static_cast<int>(parse_integer(v)); });
  rd.maybe("staleness.profile", [&](const std::string& v) { r.profile = parse_profile(v); });

  rd.maybe("schedule.kind", [&](const std::string& v) { r.schedule.kind = parse_schedule_kind(v); });
  rd.maybe("schedule.participation_prob", [&](const std::string& v) { r.schedule.participation_prob = parse_real(v); });
  rd.maybe("schedule.fresh_prob", [&](const std::string& v) { r.schedule.fresh_prob = parse_real(v); });
  rd.maybe("schedule.allow_multiple_inflight",
           [&](const std::string& v) { r.schedule.allow_multiple_inflight = parse_bool(v); });
  rd.maybe("schedule.script", [&](const std::string& v) { c.schedule_script = v; });

  rd.maybe("noise.family", [&](const std::string& v) { r.noise.family = parse_noise_family(v); });
  rd.maybe("noise.sigma2_dl", [&](const std::string& v) { r.noise.sigma2_dl = parse_real(v); });
  rd.maybe("noise.sigma2_ul", [&](const std::string& v) { r.noise.sigma2_ul = parse_real(v); });

  rd.maybe("sweep.profiles", [&](const std::string& v) {
    c.sweep_profiles.clear();
    if (v.empty()) return;
    for (const auto& p : split_trimmed(v, ';')) c.sweep_profiles.push_back(parse_profile(p));
  });
  rd.maybe("sweep.noise_energies", [&](const std::string& v) { c.sweep_noise_energies = parse_reals(v); });
  rd.maybe("sweep.horizons", [&](const std::string& v) { c.sweep_horizons = parse_integers(v); });
  rd.maybe("sweep.dl_fraction", [&](const std::string& v) { c.dl_fraction = parse_real(v); });

  rd.maybe("output.dir", [&](const std::string& v) { c.output_dir = v; });

  if (!(c.dl_fraction >= 0.0 && c.dl_fraction <= 1.0)) throw ConfigError("sweep.dl_fraction must lie in [0, 1]");
  if (r.data.dim <= 0) throw ConfigError("dataset.dim must be positive");
  return c;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  const RunConfig& r = c.run;
  pt::ptree tree;
  tree.put("run.horizon", std::to_string(r.horizon));
  tree.put("run.seed", std::to_string(r.seed));
  tree.put("run.replicas", std::to_string(r.replicas));
  tree.put("run.weighting", to_string(r.weighting));
  tree.put("run.local_epochs", std::to_string(r.local_epochs));
  tree.put("run.checkpoints", join_integers(r.checkpoints));

  tree.put("dataset.path", r.dataset_path);
  tree.put("dataset.dim", std::to_string(r.data.dim));
  tree.put("dataset.clients", std::to_string(r.data.num_clients));
  tree.put("dataset.examples_per_client", std::to_string(r.data.examples_per_client));
  tree.put("dataset.margin", format_real(r.data.target_margin));
  tree.put("dataset.radius", format_real(r.data.radius));
  tree.put("dataset.seed", std::to_string(r.data.seed));
  tree.put("dataset.partition", to_string(r.data.partition));
  tree.put("dataset.attempt_budget", std::to_string(r.data.attempt_budget));

  tree.put("staleness.tau_dl", std::to_string(r.schedule.tau_dl));
  tree.put("staleness.tau_ul", std::to_string(r.schedule.tau_ul));
  tree.put("staleness.profile", format_profile(r.profile));

  tree.put("schedule.kind", to_string(r.schedule.kind));
  tree.put("schedule.participation_prob", format_real(r.schedule.participation_prob));
  tree.put("schedule.fresh_prob", format_real(r.schedule.fresh_prob));
  tree.put("schedule.allow_multiple_inflight", r.schedule.allow_multiple_inflight ? "true" : "false");
  tree.put("schedule.script", c.schedule_script);

  tree.put("noise.family", to_string(r.noise.family));
  tree.put("noise.sigma2_dl", format_real(r.noise.sigma2_dl));
  tree.put("noise.sigma2_ul", format_real(r.noise.sigma2_ul));

  std::string profiles;
  for (std::size_t i = 0; i < c.sweep_profiles.size(); ++i) {
    if (i > 0) profiles += ';';
    profiles += format_profile(c.sweep_profiles[i]);
  }
  tree.put("sweep.profiles", profiles);
  tree.put("sweep.noise_energies", join_reals(c.sweep_noise_energies));
  tree.put("sweep.horizons", join_integers(c.sweep_horizons));
  tree.put("sweep.dl_fraction", format_real(c.dl_fraction));

  tree.put("output.dir", c.output_dir);
  pt::write_ini(out, tree);
}

void write_config(const std::filesystem::path& path, const ExperimentConfig& config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_config(out, config);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  const RunConfig& x = a.run;
  const RunConfig& y = b.run;
  const bool data = x.data.dim == y.data.dim && x.data.num_clients == y.data.num_clients &&
                    x.data.examples_per_client == y.data.examples_per_client &&
                    x.data.target_margin == y.data.target_margin && x.data.radius == y.data.radius &&
                    x.data.seed == y.data.seed && x.data.attempt_budget == y.data.attempt_budget &&
                    x.data.partition == y.data.partition;
  const bool sched = x.schedule.kind == y.schedule.kind &&
                     x.schedule.participation_prob == y.schedule.participation_prob &&
                     x.schedule.fresh_prob == y.schedule.fresh_prob && x.schedule.tau_dl == y.schedule.tau_dl &&
                     x.schedule.tau_ul == y.schedule.tau_ul &&
                     x.schedule.allow_multiple_inflight == y.schedule.allow_multiple_inflight;
  const bool noise = x.noise.family == y.noise.family && x.noise.sigma2_dl == y.noise.sigma2_dl &&
                     x.noise.sigma2_ul == y.noise.sigma2_ul;
  const bool run = x.dataset_path == y.dataset_path && x.profile == y.profile && x.weighting == y.weighting &&
                   x.local_epochs == y.local_epochs && x.horizon == y.horizon && x.seed == y.seed &&
                   x.replicas == y.replicas && x.checkpoints == y.checkpoints;
  return data && sched && noise && run && a.schedule_script == b.schedule_script &&
         a.sweep_profiles == b.sweep_profiles && a.sweep_noise_energies == b.sweep_noise_energies &&
         a.sweep_horizons == b.sweep_horizons && a.dl_fraction == b.dl_fraction && a.output_dir == b.output_dir;
}

RunConfig resolve_run_config(const ExperimentConfig& config, const std::filesystem::path& base_dir) {
  RunConfig r = config.run;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return (path.is_relative() && !base_dir.empty()) ? (base_dir / path).string() : path.string();
  };
  if (!r.dataset_path.empty()) r.dataset_path = resolve(r.dataset_path);
  if (r.profile.tau() != r.tau()) {
    throw ConfigError("staleness.profile needs tau_dl + tau_ul + 1 = " + std::to_string(r.tau() + 1) + " weights");
  }
  validate(r.noise);
  if (r.schedule.kind == ScheduleKind::kScripted) {
    if (config.schedule_script.empty()) throw ConfigError("schedule.kind = scripted needs schedule.script");
    r.schedule.script =
        std::make_shared<const std::vector<ArrivalEvent>>(read_schedule(resolve(config.schedule_script)));
  }
  for (const auto& p : config.sweep_profiles) {
    if (p.tau() != r.tau()) throw ConfigError("sweep profile length must be tau_dl + tau_ul + 1");
  }
  for (double v : config.sweep_noise_energies) {
    if (!(v >= 0.0)) throw ConfigError("sweep noise energies must be nonnegative");
  }
  return r;
}

}  // namespace staleperc
