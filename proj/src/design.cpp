#include <staleperc/design.hpp>

namespace staleperc {

ProfileDesign design_profile(const std::vector<double>& occupancy, double threshold) {
  if (occupancy.empty()) throw ContractError("design_profile: need one frequency per staleness");
  for (double f : occupancy) {
    if (!(f >= 0.0 && f <= 1.0)) throw ContractError("design_profile: frequencies must lie in [0, 1]");
  }
  const int tau = static_cast<int>(occupancy.size()) - 1;
  for (int s = 0; s <= tau; ++s) {
    if (occupancy[static_cast<std::size_t>(s)] > threshold) return {point_profile(s, tau), false};
  }
  return {uniform_profile(tau), true};
}

std::vector<double> estimate_occupancy(const SchedulePolicy& policy, std::size_t num_clients, std::int64_t rounds,
                                       std::uint64_t seed) {
  if (rounds <= 0) throw ContractError("estimate_occupancy: rounds must be positive");
  Scheduler scheduler(policy, num_clients, seed);
  std::vector<double> hits(static_cast<std::size_t>(policy.tau()) + 1, 0.0);
  for (std::int64_t t = 0; t < rounds; ++t) {
    std::vector<char> seen(hits.size(), 0);
    for (const auto& e : scheduler.next_arrivals(t)) seen[static_cast<std::size_t>(e.total_staleness())] = 1;
    for (std::size_t s = 0; s < hits.size(); ++s) hits[s] += seen[s];
  }
  for (double& h : hits) h /= static_cast<double>(rounds);
  return hits;
}

}  // namespace staleperc
