#pragma once

#include <staleperc/core.hpp>
#include <staleperc/random.hpp>

#include <random>
#include <string>

namespace staleperc {

enum class NoiseFamily { kNone, kGaussianIsotropic, kSphereUniform };

/// Effective additive link noise. Downlink perturbs the stale model a client
/// starts from, uplink perturbs the model the server receives.
struct NoiseModel {
  NoiseFamily family = NoiseFamily::kNone;
  double sigma2_dl = 0.0;
  double sigma2_ul = 0.0;

  bool noiseless() const { return family == NoiseFamily::kNone || (sigma2_dl == 0.0 && sigma2_ul == 0.0); }
};

/// Throws ConfigError on negative variances or a `none` family with nonzero
/// variance.
void validate(const NoiseModel& model);

/// Total per-round noise energy V = sigma2_dl + sigma2_ul.
inline double noise_energy(const NoiseModel& model) {
  if (model.family == NoiseFamily::kNone) return 0.0;
  return model.sigma2_dl + model.sigma2_ul;
}

/// Zero-mean noise vector with E|n|^2 = sigma2. Gaussian uses i.i.d.
/// coordinates of variance sigma2 / dim; sphere uses a uniform direction of
/// norm sqrt(sigma2).
template <typename Scalar = double>
Vector<Scalar> draw_noise(Eigen::Index dim, double sigma2, NoiseFamily family, SplitMix64& rng) {
  Vector<Scalar> n = Vector<Scalar>::Zero(dim);
  if (family == NoiseFamily::kNone || sigma2 == 0.0 || dim == 0) return n;
  std::normal_distribution<double> normal(0.0, 1.0);
  if (family == NoiseFamily::kGaussianIsotropic) {
    const double sd = std::sqrt(sigma2 / static_cast<double>(dim));
    for (Eigen::Index k = 0; k < dim; ++k) n(k) = static_cast<Scalar>(sd * normal(rng));
    return n;
  }
  Vector<double> g(dim);
  double norm = 0.0;
  do {
    for (Eigen::Index k = 0; k < dim; ++k) g(k) = normal(rng);
    norm = g.norm();
  } while (norm == 0.0);
  return (g * (std::sqrt(sigma2) / norm)).template cast<Scalar>();
}

/// v + n with n from draw_noise. The draw depends only on the stream, never
/// on the value of v.
template <typename Scalar, typename Derived>
Vector<Scalar> perturb(const Eigen::MatrixBase<Derived>& v, double sigma2, NoiseFamily family, SplitMix64& rng) {
  return v + draw_noise<Scalar>(v.size(), sigma2, family, rng);
}

std::string to_string(NoiseFamily family);
NoiseFamily parse_noise_family(const std::string& text);

}  // namespace staleperc
