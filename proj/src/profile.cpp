#include <staleperc/profile.hpp>

#include <staleperc/csv.hpp>

#include <algorithm>
#include <numeric>

namespace staleperc {

StalenessProfile::StalenessProfile(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw ConfigError("profile: needs at least one weight");
  for (double a : alpha_) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("profile: weights must be finite and nonnegative");
  }
  const double sum = std::accumulate(alpha_.begin(), alpha_.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("profile: weights sum to " + format_real(sum) + ", expected 1");
  }
  for (double& a : alpha_) a /= sum;

  tails_.assign(alpha_.size(), 0.0);
  double tail = 0.0;
  for (std::size_t j = alpha_.size(); j-- > 0;) {
    tail += alpha_[j];
    tails_[j] = tail;
  }
  tails_[0] = 1.0;

  mean_staleness_ = 0.0;
  for (std::size_t s = 0; s < alpha_.size(); ++s) mean_staleness_ += static_cast<double>(s) * alpha_[s];
}

StalenessProfile point_profile(int s, int tau) {
  if (s < 0 || s > tau) throw ConfigError("point_profile: staleness outside 0..tau");
  std::vector<double> a(static_cast<std::size_t>(tau) + 1, 0.0);
  a[static_cast<std::size_t>(s)] = 1.0;
  return StalenessProfile(std::move(a));
}

StalenessProfile uniform_profile(int tau) {
  if (tau < 0) throw ConfigError("uniform_profile: negative tau");
  const auto n = static_cast<std::size_t>(tau) + 1;
  return StalenessProfile(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

StalenessProfile parse_profile(const std::string& text) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::vector<double> alpha;
  for (const auto& tok : split_whitespace(normalized)) alpha.push_back(parse_real(tok));
  return StalenessProfile(std::move(alpha));
}

std::string format_profile(const StalenessProfile& profile, char sep) {
  std::string out;
  for (std::size_t s = 0; s < profile.alpha().size(); ++s) {
    if (s > 0) out += sep;
    out += format_real(profile.alpha()[s]);
  }
  return out;
}

}  // namespace staleperc
