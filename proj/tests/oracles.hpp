#pragma once

// Test-only reference implementations. These deliberately avoid the library
// code paths they are used to check: plain std::vector arithmetic, no Eigen,
// no shared helpers.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

struct PerceptronRun {
  Vec w;
  std::int64_t mistakes = 0;
};

/// Straight-line perceptron over an explicit example sequence, repeated for
/// `epochs` passes.
inline PerceptronRun sequential_perceptron(Vec w, const std::vector<Vec>& xs, const std::vector<int>& ys,
                                           const std::vector<std::size_t>& order, int epochs) {
  PerceptronRun r;
  for (int e = 0; e < epochs; ++e) {
    for (std::size_t j : order) {
      if (ys[j] * dot(w, xs[j]) <= 0.0) {
        for (std::size_t k = 0; k < w.size(); ++k) w[k] += ys[j] * xs[j][k];
        ++r.mistakes;
      }
    }
  }
  r.w = std::move(w);
  return r;
}

/// Phi_t = sum_{j=0}^{tau} c_j a_{t-j} with c_j recomputed from alpha as a
/// suffix sum; negative indices contribute zero.
inline Vec tail_weighted_convolution(const Vec& series, const Vec& alpha) {
  const std::size_t n = alpha.size();
  Vec c(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t s = j; s < n; ++s) c[j] += alpha[s];
  }
  Vec out(series.size(), 0.0);
  for (std::size_t t = 0; t < series.size(); ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      const long long idx = static_cast<long long>(t) - static_cast<long long>(j);
      if (idx >= 0) out[t] += c[j] * series[static_cast<std::size_t>(idx)];
    }
  }
  return out;
}

}  // namespace oracle
