#pragma once

#include <staleperc/core.hpp>
#include <staleperc/dataset.hpp>
#include <staleperc/random.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace staleperc {

template <typename Scalar>
struct BasicLocalResult {
  Vector<Scalar> w_out;
  std::int64_t mistakes = 0;
  Vector<Scalar> init_used;
};

using LocalResult = BasicLocalResult<double>;

/// Seed-determined visiting order over `n` examples.
inline std::vector<std::size_t> make_order(std::size_t n, std::uint64_t order_seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(order_seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

/// Local perceptron over `shard`, visiting examples in `order` for `epochs`
/// complete passes. A mistake is y<w, x> <= 0 and triggers w += y x.
template <typename Scalar, typename Derived>
BasicLocalResult<Scalar> local_train(const Eigen::MatrixBase<Derived>& init, const BasicShard<Scalar>& shard,
                                     const std::vector<std::size_t>& order, int epochs) {
  if (epochs < 1) throw ContractError("local_train: epochs must be >= 1");
  if (!shard.empty() && shard.dim() != init.size()) throw ContractError("local_train: dimension mismatch");
  if (order.size() != shard.size()) throw ContractError("local_train: order does not cover the shard");

  BasicLocalResult<Scalar> result;
  result.init_used = init;
  result.w_out = init;
  for (int e = 0; e < epochs; ++e) {
    for (std::size_t j : order) {
      const auto x = shard.features.col(static_cast<Eigen::Index>(j));
      const Scalar y = static_cast<Scalar>(shard.labels[j]);
      if (y * result.w_out.dot(x) <= Scalar(0)) {
        result.w_out.noalias() += y * x;
        ++result.mistakes;
      }
    }
  }
  return result;
}

template <typename Scalar, typename Derived>
BasicLocalResult<Scalar> local_train(const Eigen::MatrixBase<Derived>& init, const BasicShard<Scalar>& shard,
                                     int epochs, std::uint64_t order_seed) {
  return local_train(init, shard, make_order(shard.size(), order_seed), epochs);
}

/// Pathwise progress/norm inequalities for one local run started from
/// stale_model + downlink_noise:
///   <w*, w_out> >= <w*, stale> + <w*, noise> + margin * k
///   |w_out|^2   <= |stale + noise|^2 + radius^2 * k
template <typename Scalar>
bool check_lemma1(const BasicLocalResult<Scalar>& result, const Vector<Scalar>& stale_model,
                  const Vector<Scalar>& downlink_noise, const Vector<Scalar>& witness, double margin,
                  double radius) {
  const double k = static_cast<double>(result.mistakes);
  const Vector<Scalar> start = stale_model + downlink_noise;

  const double progress_lhs = static_cast<double>(witness.dot(result.w_out));
  const double progress_rhs = static_cast<double>(witness.dot(stale_model)) +
                              static_cast<double>(witness.dot(downlink_noise)) + margin * k;

  const double norm_lhs = static_cast<double>(result.w_out.squaredNorm());
  const double norm_rhs = static_cast<double>(start.squaredNorm()) + radius * radius * k;

  return approx_ge(progress_lhs, progress_rhs) && approx_ge(norm_rhs, norm_lhs);
}

}  // namespace staleperc
