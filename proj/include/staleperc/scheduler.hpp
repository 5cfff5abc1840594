#pragma once

#include <staleperc/core.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace staleperc {

/// One client update applied at server round `arrival_round`.
/// The client began computing at start_round = arrival_round - s_ul from the
/// server iterate of index start_round - s_dl = arrival_round - total_staleness.
struct ArrivalEvent {
  std::size_t client = 0;
  int s_dl = 0;
  int s_ul = 0;
  std::int64_t arrival_round = 0;

  std::int64_t start_round() const { return arrival_round - s_ul; }
  int total_staleness() const { return s_dl + s_ul; }
  std::int64_t read_version() const { return start_round() - s_dl; }

  friend bool operator==(const ArrivalEvent&, const ArrivalEvent&) = default;
};

enum class ScheduleKind { kBernoulliUniform, kAlwaysFresh, kScripted };

struct SchedulePolicy {
  ScheduleKind kind = ScheduleKind::kBernoulliUniform;
  double participation_prob = 1.0;
  double fresh_prob = 0.0;
  int tau_dl = 0;
  int tau_ul = 0;
  bool allow_multiple_inflight = false;
  // Scripted events, shared because policies are immutable once built.
  std::shared_ptr<const std::vector<ArrivalEvent>> script;

  int tau() const { return tau_dl + tau_ul; }
};

/// Throws ConfigError when probabilities or bounds are out of range, or when
/// a scripted event names a client >= num_clients or a staleness beyond the
/// configured bounds.
void validate(const SchedulePolicy& policy, std::size_t num_clients);

/// Constructive lower bound on P(client i arrives fresh at round t | history).
/// Throws ContractError for scripted policies and for blocking Bernoulli
/// clients, where no such bound is available.
double lower_bound_fresh_prob(const SchedulePolicy& policy);

/// Stateful arrival generator owned by one simulation loop. Rounds must be
/// requested in order 0, 1, 2, ...
class Scheduler {
 public:
  Scheduler(SchedulePolicy policy, std::size_t num_clients, std::uint64_t seed);

  /// Events applied at round t, ordered by (client, start round).
  std::vector<ArrivalEvent> next_arrivals(std::int64_t t);

  std::size_t in_flight(std::size_t client) const { return in_flight_.at(client); }
  const SchedulePolicy& policy() const { return policy_; }

 private:
  void start_jobs(std::int64_t t);

  SchedulePolicy policy_;
  std::size_t num_clients_;
  std::uint64_t seed_;
  std::int64_t next_round_ = 0;
  std::size_t script_pos_ = 0;
  std::vector<ArrivalEvent> script_sorted_;
  std::map<std::int64_t, std::vector<ArrivalEvent>> pending_;
  std::vector<std::size_t> in_flight_;
};

// Scripted schedule text format: one event per line, `t client s_dl s_ul`,
// whitespace separated; `#` starts a comment.
std::vector<ArrivalEvent> parse_schedule(std::istream& in);
std::vector<ArrivalEvent> read_schedule(const std::filesystem::path& path);
void write_schedule(std::ostream& out, const std::vector<ArrivalEvent>& events);
void write_schedule(const std::filesystem::path& path, const std::vector<ArrivalEvent>& events);

/// Runs a (non-scripted) policy for `horizon` rounds and returns every event,
/// so the same arrival pattern can be replayed as a scripted policy.
std::vector<ArrivalEvent> record_schedule(const SchedulePolicy& policy, std::size_t num_clients,
                                          std::int64_t horizon, std::uint64_t seed);

SchedulePolicy scripted_policy(std::vector<ArrivalEvent> events, int tau_dl, int tau_ul);

std::string to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(const std::string& text);

}  // namespace staleperc
