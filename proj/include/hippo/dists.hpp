#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "hippo/errors.hpp"
#include "hippo/rng.hpp"

namespace hippo {

// log(sum_i exp(x_i)) with max shift. Every categorical computation in the
// repo goes through this; direct probability products are forbidden because
// p-step sub-trajectory probabilities underflow fast.
inline double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) throw ArgumentError("log_sum_exp: empty input");
  double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;  // all -inf, or a stray inf/nan propagates
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - m);
  return m + std::log(sum);
}

inline std::vector<double> softmax(std::span<const double> logits) {
  double lse = log_sum_exp(logits);
  std::vector<double> p(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) p[i] = std::exp(logits[i] - lse);
  return p;
}

// log softmax(logits)[index]
inline double categorical_logprob(std::span<const double> logits, int index) {
  if (index < 0 || static_cast<size_t>(index) >= logits.size())
    throw ArgumentError("categorical_logprob: index out of range");
  return logits[index] - log_sum_exp(logits);
}

// d(categorical_logprob)/d(logits) = onehot(index) - softmax(logits),
// scaled by coeff, accumulated into dlogits.
inline void categorical_logprob_backward(std::span<const double> logits, int index,
                                         double coeff, std::span<double> dlogits) {
  std::vector<double> p = softmax(logits);
  for (size_t i = 0; i < logits.size(); ++i) dlogits[i] -= coeff * p[i];
  dlogits[index] += coeff;
}

constexpr double kLogTwoPi = 1.8378770664093453;  // ln(2*pi)

// Sum over dimensions of the diagonal Gaussian log density.
inline double gaussian_logprob(std::span<const double> mean, std::span<const double> log_std,
                               std::span<const double> action) {
  if (mean.size() != log_std.size() || mean.size() != action.size())
    throw ArgumentError("gaussian_logprob: length mismatch");
  double lp = 0.0;
  for (size_t i = 0; i < mean.size(); ++i) {
    double inv_std = std::exp(-log_std[i]);
    double z = (action[i] - mean[i]) * inv_std;
    lp += -0.5 * kLogTwoPi - log_std[i] - 0.5 * z * z;
  }
  return lp;
}

// Accumulates coeff * d(logprob)/d(mean) and coeff * d(logprob)/d(log_std).
inline void gaussian_logprob_backward(std::span<const double> mean,
                                      std::span<const double> log_std,
                                      std::span<const double> action, double coeff,
                                      std::span<double> dmean, std::span<double> dlog_std) {
  for (size_t i = 0; i < mean.size(); ++i) {
    double inv_var = std::exp(-2.0 * log_std[i]);
    double diff = action[i] - mean[i];
    dmean[i] += coeff * diff * inv_var;
    dlog_std[i] += coeff * (diff * diff * inv_var - 1.0);
  }
}

// Categorical action/latent distribution, parameterized by logits.
struct Categorical {
  std::vector<double> logits;

  int n() const { return static_cast<int>(logits.size()); }
  double logprob(int index) const { return categorical_logprob(logits, index); }
  std::vector<double> probs() const { return softmax(logits); }

  int sample(Rng& rng) const {
    std::vector<double> p = probs();
    double u = rng.uniform();
    double acc = 0.0;
    for (size_t i = 0; i + 1 < p.size(); ++i) {
      acc += p[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
  }
};

// Diagonal Gaussian action distribution.
struct DiagGaussian {
  std::vector<double> mean;
  std::vector<double> log_std;

  double logprob(std::span<const double> action) const {
    return gaussian_logprob(mean, log_std, action);
  }

  std::vector<double> sample(Rng& rng) const {
    std::vector<double> a(mean.size());
    for (size_t i = 0; i < mean.size(); ++i)
      a[i] = mean[i] + std::exp(log_std[i]) * rng.normal();
    return a;
  }
};

}  // namespace hippo
