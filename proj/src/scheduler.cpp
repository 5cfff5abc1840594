#include <staleperc/scheduler.hpp>

#include <staleperc/csv.hpp>
#include <staleperc/random.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

namespace staleperc {

namespace {

bool event_order(const ArrivalEvent& a, const ArrivalEvent& b) {
  if (a.arrival_round != b.arrival_round) return a.arrival_round < b.arrival_round;
  if (a.client != b.client) return a.client < b.client;
  return a.start_round() < b.start_round();
}

}  // namespace

void validate(const SchedulePolicy& p, std::size_t num_clients) {
  if (p.tau_dl < 0 || p.tau_ul < 0) throw ConfigError("schedule: staleness bounds must be nonnegative");
  if (p.kind == ScheduleKind::kBernoulliUniform) {
    if (!(p.participation_prob > 0.0 && p.participation_prob <= 1.0)) {
      throw ConfigError("schedule: participation_prob must lie in (0, 1]");
    }
    if (!(p.fresh_prob >= 0.0 && p.fresh_prob <= 1.0)) {
      throw ConfigError("schedule: fresh_prob must lie in [0, 1]");
    }
  }
  if (p.kind == ScheduleKind::kScripted) {
    if (!p.script) throw ConfigError("schedule: scripted policy without events");
    for (const auto& e : *p.script) {
      if (e.client >= num_clients) {
        throw ConfigError("schedule: scripted event at t=" + std::to_string(e.arrival_round) +
                          " names client " + std::to_string(e.client) + " >= m");
      }
      if (e.s_dl < 0 || e.s_ul < 0 || e.s_dl > p.tau_dl || e.s_ul > p.tau_ul) {
        throw ConfigError("schedule: scripted event at t=" + std::to_string(e.arrival_round) +
                          " exceeds the staleness bounds");
      }
      if (e.arrival_round < 0) throw ConfigError("schedule: scripted event with negative round");
    }
  }
}

double lower_bound_fresh_prob(const SchedulePolicy& p) {
  switch (p.kind) {
    case ScheduleKind::kAlwaysFresh:
      return 1.0;
    case ScheduleKind::kBernoulliUniform:
      if (!p.allow_multiple_inflight) {
        throw ContractError("lower_bound_fresh_prob: blocking clients have no unconditional fresh-arrival bound");
      }
      return p.participation_prob * p.fresh_prob;
    case ScheduleKind::kScripted:
      break;
  }
  throw ContractError("lower_bound_fresh_prob: scripted schedules have no constructive bound");
}

Scheduler::Scheduler(SchedulePolicy policy, std::size_t num_clients, std::uint64_t seed)
    : policy_(std::move(policy)), num_clients_(num_clients), seed_(seed), in_flight_(num_clients, 0) {
  validate(policy_, num_clients_);
  if (policy_.kind == ScheduleKind::kScripted) {
    script_sorted_ = *policy_.script;
    std::stable_sort(script_sorted_.begin(), script_sorted_.end(), event_order);
  }
}

void Scheduler::start_jobs(std::int64_t t) {
  std::uniform_int_distribution<int> dl(0, policy_.tau_dl);
  std::uniform_int_distribution<int> ul(0, policy_.tau_ul);
  for (std::size_t i = 0; i < num_clients_; ++i) {
    if (!policy_.allow_multiple_inflight && in_flight_[i] > 0) continue;
    const auto ci = static_cast<std::int64_t>(i);
    SplitMix64 join = make_stream(seed_, Purpose::kParticipation, {ci, t});
    if (!(join.uniform() < policy_.participation_prob)) continue;

    SplitMix64 delay = make_stream(seed_, Purpose::kDelay, {ci, t});
    ArrivalEvent e;
    e.client = i;
    if (delay.uniform() >= policy_.fresh_prob) {
      e.s_dl = dl(delay);
      e.s_ul = ul(delay);
    }
    e.arrival_round = t + e.s_ul;
    pending_[e.arrival_round].push_back(e);
    ++in_flight_[i];
  }
}

std::vector<ArrivalEvent> Scheduler::next_arrivals(std::int64_t t) {
  if (t != next_round_) throw ContractError("Scheduler: rounds must be requested in order");
  ++next_round_;

  std::vector<ArrivalEvent> out;
  switch (policy_.kind) {
    case ScheduleKind::kAlwaysFresh:
      for (std::size_t i = 0; i < num_clients_; ++i) out.push_back({i, 0, 0, t});
      return out;

    case ScheduleKind::kScripted:
      while (script_pos_ < script_sorted_.size() && script_sorted_[script_pos_].arrival_round < t) ++script_pos_;
      while (script_pos_ < script_sorted_.size() && script_sorted_[script_pos_].arrival_round == t) {
        out.push_back(script_sorted_[script_pos_++]);
      }
      return out;

    case ScheduleKind::kBernoulliUniform:
      // A job counts as in flight through its landing round, so a blocking
      // client never lands and starts in the same round.
      start_jobs(t);
      if (auto it = pending_.find(t); it != pending_.end()) {
        out = std::move(it->second);
        pending_.erase(it);
      }
      for (const auto& e : out) --in_flight_[e.client];
      std::stable_sort(out.begin(), out.end(), event_order);
      return out;
  }
  return out;
}

std::vector<ArrivalEvent> parse_schedule(std::istream& in) {
  std::vector<ArrivalEvent> events;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto f = split_whitespace(line);
    if (f.empty()) continue;
    if (f.size() != 4) throw IoError("schedule line " + std::to_string(lineno) + ": expected `t client s_dl s_ul`");
    const long long t = parse_integer(f[0]);
    const long long client = parse_integer(f[1]);
    const long long s_dl = parse_integer(f[2]);
    const long long s_ul = parse_integer(f[3]);
    if (t < 0 || client < 0 || s_dl < 0 || s_ul < 0) {
      throw IoError("schedule line " + std::to_string(lineno) + ": negative field");
    }
    events.push_back({static_cast<std::size_t>(client), static_cast<int>(s_dl), static_cast<int>(s_ul), t});
  }
  return events;
}

std::vector<ArrivalEvent> read_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_schedule(in);
}

void write_schedule(std::ostream& out, const std::vector<ArrivalEvent>& events) {
  out << "# t client s_dl s_ul\n";
  for (const auto& e : events) {
    out << e.arrival_round << ' ' << e.client << ' ' << e.s_dl << ' ' << e.s_ul << '\n';
  }
}

void write_schedule(const std::filesystem::path& path, const std::vector<ArrivalEvent>& events) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_schedule(out, events);
}

std::vector<ArrivalEvent> record_schedule(const SchedulePolicy& policy, std::size_t num_clients,
                                          std::int64_t horizon, std::uint64_t seed) {
  Scheduler scheduler(policy, num_clients, seed);
  std::vector<ArrivalEvent> all;
  for (std::int64_t t = 0; t < horizon; ++t) {
    auto events = scheduler.next_arrivals(t);
    all.insert(all.end(), events.begin(), events.end());
  }
  return all;
}

SchedulePolicy scripted_policy(std::vector<ArrivalEvent> events, int tau_dl, int tau_ul) {
  SchedulePolicy p;
  p.kind = ScheduleKind::kScripted;
  p.tau_dl = tau_dl;
  p.tau_ul = tau_ul;
  p.script = std::make_shared<const std::vector<ArrivalEvent>>(std::move(events));
  return p;
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kBernoulliUniform: return "bernoulli_uniform";
    case ScheduleKind::kAlwaysFresh: return "always_fresh";
    case ScheduleKind::kScripted: return "scripted";
  }
  return "unknown";
}

ScheduleKind parse_schedule_kind(const std::string& text) {
  if (text == "bernoulli_uniform") return ScheduleKind::kBernoulliUniform;
  if (text == "always_fresh") return ScheduleKind::kAlwaysFresh;
  if (text == "scripted") return ScheduleKind::kScripted;
  throw ConfigError("unknown schedule kind '" + text + "'");
}

}  // namespace staleperc
