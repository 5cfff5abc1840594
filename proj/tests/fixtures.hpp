#pragma once

#include <staleperc/engine.hpp>

namespace fixture {

inline staleperc::SchedulePolicy bernoulli(double p, double f, int tau_dl, int tau_ul, bool multi = false) {
  staleperc::SchedulePolicy policy;
  policy.kind = staleperc::ScheduleKind::kBernoulliUniform;
  policy.participation_prob = p;
  policy.fresh_prob = f;
  policy.tau_dl = tau_dl;
  policy.tau_ul = tau_ul;
  policy.allow_multiple_inflight = multi;
  return policy;
}

inline staleperc::RunConfig small_config(std::uint64_t seed = 1) {
  staleperc::RunConfig c;
  c.data.dim = 5;
  c.data.num_clients = 4;
  c.data.examples_per_client = 15;
  c.data.target_margin = 0.1;
  c.data.seed = 100 + seed;
  c.schedule = bernoulli(0.6, 0.5, 1, 1);
  c.profile = staleperc::StalenessProfile({0.5, 0.3, 0.2});
  c.horizon = 200;
  c.seed = seed;
  return c;
}

}  // namespace fixture
