#pragma once

#include <staleperc/core.hpp>
#include <staleperc/profile.hpp>
#include <staleperc/scheduler.hpp>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace staleperc {

/// members[s] lists indices into the round's arrival list whose total
/// staleness equals s. Together they partition the arrival list.
struct Buckets {
  std::vector<std::vector<std::size_t>> members;

  int tau() const { return static_cast<int>(members.size()) - 1; }
  bool empty(int s) const { return members.at(static_cast<std::size_t>(s)).empty(); }
};

Buckets bucketize(std::span<const ArrivalEvent> events, int tau);

enum class WeightingMode { kUniform, kFreshMistakeAware };

/// mu[i] is the weight of arrival i; padding[s] = alpha_s for each empty
/// bucket s, applied to the cached iterate w_{t-s}.
struct WeightAssignment {
  std::vector<double> mu;
  std::map<int, double> padding;

  double total_mass() const;
};

/// Splits alpha_s across bucket s. kUniform gives alpha_s / |B_s| to every
/// member and depends on bucket occupancy only. kFreshMistakeAware puts
/// alpha_0 on the fresh arrivals with k > 0 (uniform fallback when none
/// mistook) and is legal only on noiseless links.
WeightAssignment assign_weights(const Buckets& buckets, const StalenessProfile& profile, WeightingMode mode,
                                std::span<const std::int64_t> mistakes = {}, bool noiseless = true);

/// Current iterate plus a ring of the last tau+1 iterates. Slots that refer
/// to rounds before 0 hold the zero vector.
template <typename Scalar>
class BasicServerState {
 public:
  BasicServerState(Eigen::Index dim, int tau) : cache_(static_cast<std::size_t>(tau) + 1, Vector<Scalar>::Zero(dim)) {
    if (tau < 0) throw ContractError("ServerState: negative tau");
  }

  std::int64_t round() const { return round_; }
  int tau() const { return static_cast<int>(cache_.size()) - 1; }
  Eigen::Index dim() const { return cache_.front().size(); }

  /// w_t.
  const Vector<Scalar>& current() const { return iterate(0); }

  /// w_{t-s} for s in 0..tau.
  const Vector<Scalar>& iterate(int s) const {
    if (s < 0 || s > tau()) throw ContractError("ServerState: staleness outside the cache");
    const std::size_t n = cache_.size();
    return cache_[(head_ + n - static_cast<std::size_t>(s)) % n];
  }

  /// Pushes w_{t+1}, dropping w_{t-tau}, and increments the round.
  void advance(Vector<Scalar> next) {
    if (next.size() != dim()) throw ContractError("ServerState: dimension mismatch");
    head_ = (head_ + 1) % cache_.size();
    cache_[head_] = std::move(next);
    ++round_;
  }

 private:
  std::vector<Vector<Scalar>> cache_;
  std::size_t head_ = 0;
  std::int64_t round_ = 0;
};

using ServerState = BasicServerState<double>;

/// w_{t+1} = sum_i mu_i * received_i + sum_{empty s} pi_s * w_{t-s}.
/// `received[i]` is the uplink-perturbed model of arrival i.
template <typename Scalar>
Vector<Scalar> aggregate(const BasicServerState<Scalar>& state, std::span<const Vector<Scalar>> received,
                         const WeightAssignment& assignment) {
  if (received.size() != assignment.mu.size()) {
    throw ContractError("server_step: received models do not match the arrival set");
  }
  if (std::abs(assignment.total_mass() - 1.0) > 1e-9) {
    throw ContractError("server_step: weights do not sum to 1");
  }
  Vector<Scalar> next = Vector<Scalar>::Zero(state.dim());
  for (std::size_t i = 0; i < received.size(); ++i) {
    if (received[i].size() != state.dim()) throw ContractError("server_step: dimension mismatch");
    if (assignment.mu[i] != 0.0) next.noalias() += static_cast<Scalar>(assignment.mu[i]) * received[i];
  }
  for (const auto& [s, pi] : assignment.padding) {
    if (pi != 0.0) next.noalias() += static_cast<Scalar>(pi) * state.iterate(s);
  }
  return next;
}

/// One server update: aggregates, rotates the cache and advances the round.
template <typename Scalar>
BasicServerState<Scalar> server_step(BasicServerState<Scalar> state, std::span<const Vector<Scalar>> received,
                                     const WeightAssignment& assignment) {
  Vector<Scalar> next = aggregate(state, received, assignment);
  state.advance(std::move(next));
  return state;
}

/// Checks sum_i mu_i Z[s_i] + sum_{empty s} pi_s Z[s] == sum_s alpha_s Z[s]
/// within 1e-9, where z[s] stands for Z_{t-s}.
bool alpha_identity_check(const WeightAssignment& assignment, const Buckets& buckets,
                          std::span<const double> z, const StalenessProfile& profile);

std::string to_string(WeightingMode mode);
WeightingMode parse_weighting_mode(const std::string& text);

}  // namespace staleperc
