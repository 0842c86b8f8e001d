#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "hippo/errors.hpp"
#include "hippo/params.hpp"

namespace hippo {

// A differentiable scalar loss over a flat parameter vector. Gradients are
// hand-derived per loss; finite_diff_check is the contract that keeps them
// honest (every loss in the repo must pass it at 1e-4 relative error).
class Loss {
 public:
  virtual ~Loss() = default;
  virtual double value(const ParamVector& params) const = 0;
  // Accumulate the gradient at params into grad (same layout).
  virtual void add_gradient(const ParamVector& params, GradientVector& grad) const = 0;
};

// Adapter for ad-hoc losses in tests and small fits.
class FunctionLoss : public Loss {
 public:
  using ValueFn = std::function<double(const ParamVector&)>;
  using GradFn = std::function<void(const ParamVector&, GradientVector&)>;
  FunctionLoss(ValueFn v, GradFn g) : value_(std::move(v)), grad_(std::move(g)) {}
  double value(const ParamVector& p) const override { return value_(p); }
  void add_gradient(const ParamVector& p, GradientVector& g) const override { grad_(p, g); }

 private:
  ValueFn value_;
  GradFn grad_;
};

inline GradientVector grad(const Loss& loss, const ParamVector& params) {
  double v = loss.value(params);
  if (!std::isfinite(v)) throw NumericalError("grad: loss non-finite at evaluation point");
  GradientVector g(params.layout);
  loss.add_gradient(params, g);
  if (!g.all_finite()) {
    for (const auto& s : params.layout->segments()) {
      for (size_t i = s.offset; i < s.offset + s.size; ++i) {
        if (!std::isfinite(g.values[i]))
          throw NumericalError("grad: non-finite gradient in segment " + s.name);
      }
    }
  }
  return g;
}

struct FiniteDiffReport {
  double max_rel_err = 0.0;
  size_t worst_index = 0;
  bool pass = false;
};

// Central differences against the analytic gradient, elementwise, with
// combined-magnitude normalization |g - fd| / max(1, |g|, |fd|).
inline FiniteDiffReport finite_diff_check(const Loss& loss, const ParamVector& params,
                                          double step, double tol) {
  if (step <= 0.0) throw ArgumentError("finite_diff_check: step must be > 0");
  GradientVector g = grad(loss, params);
  ParamVector probe = params;
  FiniteDiffReport report;
  for (size_t i = 0; i < params.values.size(); ++i) {
    double saved = probe.values[i];
    probe.values[i] = saved + step;
    double up = loss.value(probe);
    probe.values[i] = saved - step;
    double down = loss.value(probe);
    probe.values[i] = saved;
    double fd = (up - down) / (2.0 * step);
    double denom = std::max({1.0, std::abs(g.values[i]), std::abs(fd)});
    double rel = std::abs(g.values[i] - fd) / denom;
    if (rel > report.max_rel_err) {
      report.max_rel_err = rel;
      report.worst_index = i;
    }
  }
  report.pass = report.max_rel_err < tol;
  return report;
}

}  // namespace hippo
