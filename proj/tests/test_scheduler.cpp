#include <staleperc/scheduler.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace staleperc;

namespace {

SchedulePolicy bernoulli(double p, double f, int tau_dl, int tau_ul, bool multi) {
  SchedulePolicy policy;
  policy.kind = ScheduleKind::kBernoulliUniform;
  policy.participation_prob = p;
  policy.fresh_prob = f;
  policy.tau_dl = tau_dl;
  policy.tau_ul = tau_ul;
  policy.allow_multiple_inflight = multi;
  return policy;
}

}  // namespace

TEST(Scheduler, AlwaysFreshDeliversEveryClient) {
  SchedulePolicy policy;
  policy.kind = ScheduleKind::kAlwaysFresh;
  Scheduler s(policy, 3, 0);
  const auto events = s.next_arrivals(0);
  ASSERT_EQ(events.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(events[i].client, i);
    EXPECT_EQ(events[i].s_dl, 0);
    EXPECT_EQ(events[i].s_ul, 0);
    EXPECT_EQ(events[i].total_staleness(), 0);
  }
}

TEST(Scheduler, ScriptedLineReplaysExactly) {
  std::istringstream in("# t client s_dl s_ul\n5 2 1 2\n");
  const auto events = parse_schedule(in);
  ASSERT_EQ(events.size(), 1u);
  Scheduler s(scripted_policy(events, 1, 2), 3, 0);
  for (std::int64_t t = 0; t < 5; ++t) EXPECT_TRUE(s.next_arrivals(t).empty());
  const auto at5 = s.next_arrivals(5);
  ASSERT_EQ(at5.size(), 1u);
  EXPECT_EQ(at5[0].client, 2u);
  EXPECT_EQ(at5[0].total_staleness(), 3);
  EXPECT_EQ(at5[0].start_round(), 3);
  EXPECT_EQ(at5[0].read_version(), 2);
  EXPECT_TRUE(s.next_arrivals(6).empty());
}

TEST(Scheduler, ScriptedValidation) {
  std::vector<ArrivalEvent> bad_client = {{5, 0, 0, 1}};
  EXPECT_THROW(validate(scripted_policy(bad_client, 1, 1), 3), ConfigError);
  std::vector<ArrivalEvent> too_stale = {{0, 2, 0, 1}};
  EXPECT_THROW(validate(scripted_policy(too_stale, 1, 1), 3), ConfigError);
  std::vector<ArrivalEvent> ok = {{0, 1, 1, 1}};
  EXPECT_NO_THROW(validate(scripted_policy(ok, 1, 1), 3));
  EXPECT_THROW(validate(bernoulli(1.5, 0.5, 0, 0, true), 3), ConfigError);
  EXPECT_THROW(validate(bernoulli(0.5, -0.1, 0, 0, true), 3), ConfigError);
}

TEST(Scheduler, ScheduleParseErrors) {
  std::istringstream short_line("1 2 3\n");
  EXPECT_THROW(parse_schedule(short_line), IoError);
  std::istringstream negative("1 2 -1 0\n");
  EXPECT_THROW(parse_schedule(negative), IoError);
}

TEST(Scheduler, ForcedFreshArrivalEveryRound) {
  Scheduler s(bernoulli(1.0, 1.0, 2, 2, true), 4, 9);
  for (std::int64_t t = 0; t < 50; ++t) {
    const auto events = s.next_arrivals(t);
    ASSERT_EQ(events.size(), 4u);
    for (const auto& e : events) EXPECT_EQ(e.total_staleness(), 0);
  }
  EXPECT_DOUBLE_EQ(lower_bound_fresh_prob(bernoulli(1.0, 1.0, 2, 2, true)), 1.0);
}

TEST(Scheduler, FreshLowerBound) {
  SchedulePolicy fresh;
  fresh.kind = ScheduleKind::kAlwaysFresh;
  EXPECT_DOUBLE_EQ(lower_bound_fresh_prob(fresh), 1.0);
  EXPECT_DOUBLE_EQ(lower_bound_fresh_prob(bernoulli(0.5, 0.4, 1, 1, true)), 0.2);
  EXPECT_THROW(lower_bound_fresh_prob(bernoulli(0.5, 0.4, 1, 1, false)), ContractError);
  EXPECT_THROW(lower_bound_fresh_prob(scripted_policy({}, 0, 0)), ContractError);
}

TEST(Scheduler, RoundsMustBeRequestedInOrder) {
  Scheduler s(bernoulli(0.5, 0.5, 1, 1, true), 2, 0);
  s.next_arrivals(0);
  EXPECT_THROW(s.next_arrivals(2), ContractError);
}

TEST(Scheduler, EventsAreWellFormedAndBounded) {
  for (bool multi : {false, true}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto policy = bernoulli(0.6, 0.3, 2, 3, multi);
      const std::int64_t horizon = 200;
      Scheduler s(policy, 5, seed);
      std::size_t total = 0;
      for (std::int64_t t = 0; t < horizon; ++t) {
        const auto events = s.next_arrivals(t);
        for (std::size_t k = 0; k < events.size(); ++k) {
          const auto& e = events[k];
          EXPECT_EQ(e.arrival_round, t);
          EXPECT_LT(e.client, 5u);
          EXPECT_GE(e.s_dl, 0);
          EXPECT_LE(e.s_dl, 2);
          EXPECT_GE(e.s_ul, 0);
          EXPECT_LE(e.s_ul, 3);
          EXPECT_GE(e.start_round(), 0);
          if (k > 0) {
            const auto& prev = events[k - 1];
            EXPECT_TRUE(prev.client < e.client ||
                        (prev.client == e.client && prev.start_round() <= e.start_round()));
          }
          if (!multi && k > 0) EXPECT_NE(events[k - 1].client, e.client);
        }
        total += events.size();
        for (std::size_t i = 0; i < 5; ++i) {
          EXPECT_LE(s.in_flight(i), multi ? 4u : 1u);
        }
      }
      EXPECT_EQ(record_schedule(policy, 5, horizon, seed).size(), total);
    }
  }
}

TEST(Scheduler, BlockingClientsNeverOverlap) {
  const auto policy = bernoulli(0.9, 0.1, 2, 3, false);
  const auto events = record_schedule(policy, 3, 500, 4);
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> jobs(3);
  for (const auto& e : events) jobs[e.client].push_back({e.start_round(), e.arrival_round});
  for (auto& list : jobs) {
    std::sort(list.begin(), list.end());
    for (std::size_t k = 1; k < list.size(); ++k) EXPECT_GT(list[k].first, list[k - 1].second);
  }
}

TEST(Scheduler, SeedDeterminesSchedule) {
  const auto policy = bernoulli(0.5, 0.5, 1, 1, true);
  EXPECT_EQ(record_schedule(policy, 4, 100, 1), record_schedule(policy, 4, 100, 1));
  EXPECT_NE(record_schedule(policy, 4, 100, 1), record_schedule(policy, 4, 100, 2));
}

TEST(Scheduler, RecordedScheduleReplaysAsScript) {
  const auto policy = bernoulli(0.7, 0.4, 1, 2, true);
  const auto events = record_schedule(policy, 4, 80, 13);
  std::stringstream file;
  write_schedule(file, events);
  const auto parsed = parse_schedule(file);
  EXPECT_EQ(parsed, events);

  Scheduler live(policy, 4, 13);
  Scheduler replay(scripted_policy(parsed, 1, 2), 4, 999);
  for (std::int64_t t = 0; t < 80; ++t) EXPECT_EQ(live.next_arrivals(t), replay.next_arrivals(t));
}

TEST(Scheduler, KindNames) {
  for (auto k : {ScheduleKind::kBernoulliUniform, ScheduleKind::kAlwaysFresh, ScheduleKind::kScripted}) {
    EXPECT_EQ(parse_schedule_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_schedule_kind("sometimes"), ConfigError);
}
