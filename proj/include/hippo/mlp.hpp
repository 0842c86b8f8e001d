#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hippo/errors.hpp"
#include "hippo/params.hpp"
#include "hippo/rng.hpp"

namespace hippo {

// Fully-connected net: tanh hidden layers, linear output head.
struct MlpArch {
  int input_dim = 1;
  std::vector<int> hidden;
  int output_dim = 1;

  void validate() const {
    if (input_dim < 1 || output_dim < 1) throw ConfigError("mlp dims must be >= 1");
    for (int h : hidden) {
      if (h < 1) throw ConfigError("mlp hidden width must be >= 1");
    }
  }

  int layer_count() const { return static_cast<int>(hidden.size()) + 1; }

  int layer_in(int i) const { return i == 0 ? input_dim : hidden[i - 1]; }
  int layer_out(int i) const {
    return i == static_cast<int>(hidden.size()) ? output_dim : hidden[i];
  }

  size_t param_count() const {
    size_t n = 0;
    for (int i = 0; i < layer_count(); ++i)
      n += static_cast<size_t>(layer_out(i)) * layer_in(i) + layer_out(i);
    return n;
  }
};

// Registers W{i}/b{i} segments for an arch under a prefix ("manager/W0", ...).
inline void add_mlp_segments(ParamLayout& layout, const std::string& prefix,
                             const MlpArch& arch) {
  arch.validate();
  for (int i = 0; i < arch.layer_count(); ++i) {
    layout.add(prefix + "/W" + std::to_string(i), {arch.layer_out(i), arch.layer_in(i)});
    layout.add(prefix + "/b" + std::to_string(i), {arch.layer_out(i)});
  }
}

// Scaled-uniform init: W ~ U(+-sqrt(6/(fan_in+fan_out))), biases zero, and the
// output head shrunk so fresh policies start near uniform / near zero-mean.
inline void init_mlp_params(ParamVector& params, const std::string& prefix,
                            const MlpArch& arch, Rng& rng, double head_scale = 0.01) {
  for (int i = 0; i < arch.layer_count(); ++i) {
    auto w = params.seg(prefix + "/W" + std::to_string(i));
    double bound = std::sqrt(6.0 / (arch.layer_in(i) + arch.layer_out(i)));
    if (i == arch.layer_count() - 1) bound *= head_scale;
    for (double& v : w) v = rng.uniform(-bound, bound);
    auto b = params.seg(prefix + "/b" + std::to_string(i));
    for (double& v : b) v = 0.0;
  }
}

// Per-layer activations kept for the backward pass. Reused across calls to
// avoid allocation in rollout/training inner loops.
struct MlpWorkspace {
  std::vector<std::vector<double>> act;  // act[0] = input, act[i] = output of layer i-1
  std::vector<double> delta;             // scratch for backprop

  void resize(const MlpArch& arch) {
    act.resize(arch.layer_count() + 1);
    act[0].resize(arch.input_dim);
    for (int i = 0; i < arch.layer_count(); ++i) act[i + 1].resize(arch.layer_out(i));
  }
};

// Forward pass; leaves activations in ws for a subsequent backward call.
// Output is ws.act.back(). Pure: identical (params, input) give identical output.
inline std::span<const double> mlp_forward(const ParamVector& params,
                                           const std::string& prefix, const MlpArch& arch,
                                           std::span<const double> input, MlpWorkspace& ws) {
  if (static_cast<int>(input.size()) != arch.input_dim)
    throw ConfigError("mlp_forward: input length " + std::to_string(input.size()) +
                      " != arch input_dim " + std::to_string(arch.input_dim));
  ws.resize(arch);
  std::copy(input.begin(), input.end(), ws.act[0].begin());
  for (int i = 0; i < arch.layer_count(); ++i) {
    auto w = params.seg(prefix + "/W" + std::to_string(i));
    auto b = params.seg(prefix + "/b" + std::to_string(i));
    const auto& in = ws.act[i];
    auto& out = ws.act[i + 1];
    int rows = arch.layer_out(i), cols = arch.layer_in(i);
    bool last = (i == arch.layer_count() - 1);
    for (int r = 0; r < rows; ++r) {
      const double* wr = w.data() + static_cast<size_t>(r) * cols;
      double acc = b[r];
      for (int c = 0; c < cols; ++c) acc += wr[c] * in[c];
      out[r] = last ? acc : std::tanh(acc);
    }
  }
  return ws.act.back();
}

// Convenience overload for callers that do not need gradients.
inline std::vector<double> mlp_forward(const ParamVector& params, const std::string& prefix,
                                       const MlpArch& arch, std::span<const double> input) {
  MlpWorkspace ws;
  auto out = mlp_forward(params, prefix, arch, input, ws);
  return {out.begin(), out.end()};
}

// Backprop dloss/doutput through the net whose activations are in ws,
// accumulating coeff-scaled parameter gradients into grad. The input is not
// differentiated (observations are data, not parameters).
inline void mlp_backward(const ParamVector& params, const std::string& prefix,
                         const MlpArch& arch, const MlpWorkspace& ws,
                         std::span<const double> dloss_doutput, double coeff,
                         GradientVector& grad) {
  std::vector<double> g(dloss_doutput.begin(), dloss_doutput.end());
  for (int i = arch.layer_count() - 1; i >= 0; --i) {
    auto dw = grad.seg(prefix + "/W" + std::to_string(i));
    auto db = grad.seg(prefix + "/b" + std::to_string(i));
    const auto& in = ws.act[i];
    int rows = arch.layer_out(i), cols = arch.layer_in(i);
    for (int r = 0; r < rows; ++r) {
      double gr = coeff * g[r];
      db[r] += gr;
      double* dwr = dw.data() + static_cast<size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) dwr[c] += gr * in[c];
    }
    if (i == 0) break;
    auto w = params.seg(prefix + "/W" + std::to_string(i));
    std::vector<double> gprev(cols, 0.0);
    for (int r = 0; r < rows; ++r) {
      const double* wr = w.data() + static_cast<size_t>(r) * cols;
      double gr = g[r];
      for (int c = 0; c < cols; ++c) gprev[c] += wr[c] * gr;
    }
    // tanh' = 1 - a^2 against the stored post-activation
    for (int c = 0; c < cols; ++c) gprev[c] *= 1.0 - in[c] * in[c];
    g = std::move(gprev);
  }
}

}  // namespace hippo
