#include <staleperc/aggregator.hpp>

namespace staleperc {

Buckets bucketize(std::span<const ArrivalEvent> events, int tau) {
  if (tau < 0) throw ContractError("bucketize: negative tau");
  Buckets b;
  b.members.resize(static_cast<std::size_t>(tau) + 1);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const int s = events[i].total_staleness();
    if (s < 0 || s > tau) {
      throw ContractError("bucketize: total staleness " + std::to_string(s) + " outside 0.." + std::to_string(tau));
    }
    b.members[static_cast<std::size_t>(s)].push_back(i);
  }
  return b;
}

double WeightAssignment::total_mass() const {
  double m = 0.0;
  for (double w : mu) m += w;
  for (const auto& [s, pi] : padding) m += pi;
  return m;
}

WeightAssignment assign_weights(const Buckets& buckets, const StalenessProfile& profile, WeightingMode mode,
                                std::span<const std::int64_t> mistakes, bool noiseless) {
  if (buckets.tau() != profile.tau()) throw ContractError("assign_weights: profile and buckets disagree on tau");
  if (mode == WeightingMode::kFreshMistakeAware && !noiseless) {
    throw ContractError("assign_weights: mistake-aware weighting requires noiseless links");
  }

  std::size_t n = 0;
  for (const auto& m : buckets.members) n += m.size();
  if (mode == WeightingMode::kFreshMistakeAware && mistakes.size() != n) {
    throw ContractError("assign_weights: mistake counts do not cover the arrivals");
  }

  WeightAssignment w;
  w.mu.assign(n, 0.0);
  for (int s = 0; s <= profile.tau(); ++s) {
    const auto& members = buckets.members[static_cast<std::size_t>(s)];
    const double alpha = profile.alpha(s);
    if (members.empty()) {
      w.padding[s] = alpha;
      continue;
    }
    if (s == 0 && mode == WeightingMode::kFreshMistakeAware) {
      std::size_t mistaking = 0;
      for (std::size_t i : members) mistaking += mistakes[i] > 0 ? 1 : 0;
      if (mistaking > 0) {
        for (std::size_t i : members) {
          w.mu[i] = mistakes[i] > 0 ? alpha / static_cast<double>(mistaking) : 0.0;
        }
        continue;
      }
    }
    for (std::size_t i : members) w.mu[i] = alpha / static_cast<double>(members.size());
  }
  return w;
}

bool alpha_identity_check(const WeightAssignment& assignment, const Buckets& buckets, std::span<const double> z,
                          const StalenessProfile& profile) {
  if (z.size() != profile.alpha().size() || buckets.tau() != profile.tau()) {
    throw ContractError("alpha_identity_check: series length must be tau + 1");
  }
  double lhs = 0.0;
  for (std::size_t s = 0; s < buckets.members.size(); ++s) {
    for (std::size_t i : buckets.members[s]) lhs += assignment.mu.at(i) * z[s];
  }
  for (const auto& [s, pi] : assignment.padding) lhs += pi * z[static_cast<std::size_t>(s)];
  double rhs = 0.0;
  for (std::size_t s = 0; s < z.size(); ++s) rhs += profile.alpha()[s] * z[s];
  return std::abs(lhs - rhs) <= scaled_tolerance(lhs, rhs);
}

std::string to_string(WeightingMode mode) {
  return mode == WeightingMode::kUniform ? "uniform" : "fresh_mistake_aware";
}

WeightingMode parse_weighting_mode(const std::string& text) {
  if (text == "uniform") return WeightingMode::kUniform;
  if (text == "fresh_mistake_aware") return WeightingMode::kFreshMistakeAware;
  throw ConfigError("unknown weighting mode '" + text + "'");
}

}  // namespace staleperc
