#include <staleperc/channel.hpp>

namespace staleperc {

void validate(const NoiseModel& model) {
  if (!(model.sigma2_dl >= 0.0) || !(model.sigma2_ul >= 0.0)) {
    throw ConfigError("noise: variances must be nonnegative");
  }
  if (model.family == NoiseFamily::kNone && (model.sigma2_dl != 0.0 || model.sigma2_ul != 0.0)) {
    throw ConfigError("noise: family 'none' requires zero variances");
  }
}

std::string to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kNone: return "none";
    case NoiseFamily::kGaussianIsotropic: return "gaussian_isotropic";
    case NoiseFamily::kSphereUniform: return "sphere_uniform";
  }
  return "unknown";
}

NoiseFamily parse_noise_family(const std::string& text) {
  if (text == "none") return NoiseFamily::kNone;
  if (text == "gaussian_isotropic" || text == "gaussian") return NoiseFamily::kGaussianIsotropic;
  if (text == "sphere_uniform" || text == "sphere") return NoiseFamily::kSphereUniform;
  throw ConfigError("unknown noise family '" + text + "'");
}

}  // namespace staleperc
