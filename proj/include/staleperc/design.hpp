#pragma once

#include <staleperc/profile.hpp>
#include <staleperc/scheduler.hpp>

#include <cstdint>
#include <vector>

namespace staleperc {

struct ProfileDesign {
  StalenessProfile profile;
  bool fallback = false;  // no bucket was reliable; profile is uniform
};

/// All mass on the smallest staleness whose bucket occupancy frequency
/// exceeds `threshold`. This minimizes the mean staleness over profiles
/// supported on reliable buckets. With no reliable bucket, falls back to the
/// uniform profile over 0..tau.
ProfileDesign design_profile(const std::vector<double>& occupancy, double threshold = 0.5);

/// Fraction of rounds, out of `rounds`, in which bucket s is nonempty.
std::vector<double> estimate_occupancy(const SchedulePolicy& policy, std::size_t num_clients, std::int64_t rounds,
                                       std::uint64_t seed);

}  // namespace staleperc
