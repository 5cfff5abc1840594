#pragma once

#include <staleperc/core.hpp>

#include <string>
#include <vector>

namespace staleperc {

/// Server-enforced weights over total-staleness buckets 0..tau, with the
/// derived mean staleness s_bar, S = 1 + s_bar and tail sums
/// c_j = sum_{s >= j} alpha_s.
class StalenessProfile {
 public:
  StalenessProfile() : StalenessProfile(std::vector<double>{1.0}) {}

  /// Accepts weights that are nonnegative and sum to 1 within 1e-9 (then
  /// normalizes exactly). Anything else throws ConfigError.
  explicit StalenessProfile(std::vector<double> alpha);

  const std::vector<double>& alpha() const { return alpha_; }
  double alpha(int s) const { return alpha_.at(static_cast<std::size_t>(s)); }
  int tau() const { return static_cast<int>(alpha_.size()) - 1; }
  double mean_staleness() const { return mean_staleness_; }
  double S() const { return 1.0 + mean_staleness_; }
  const std::vector<double>& tails() const { return tails_; }

  friend bool operator==(const StalenessProfile& a, const StalenessProfile& b) { return a.alpha_ == b.alpha_; }

 private:
  std::vector<double> alpha_;
  std::vector<double> tails_;
  double mean_staleness_ = 0.0;
};

/// Point mass on staleness s within 0..tau.
StalenessProfile point_profile(int s, int tau);

/// Uniform over 0..tau.
StalenessProfile uniform_profile(int tau);

/// "a0,a1,..." (commas or whitespace).
StalenessProfile parse_profile(const std::string& text);
std::string format_profile(const StalenessProfile& profile, char sep = ',');

}  // namespace staleperc
