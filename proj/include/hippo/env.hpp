#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hippo/errors.hpp"
#include "hippo/rng.hpp"

namespace hippo {

using Observation = std::vector<double>;

enum class EnvKind { DiscreteGather, ChainBlocks };

// Stochastic dynamics knobs; the perturbation suite maps onto exactly these.
struct Dynamics {
  double action_fail_prob = 0.0;  // action replaced by no-op
  double effect_scale = 1.0;      // movement/jump effectiveness multiplier
  double obs_noise_std = 0.0;     // gaussian noise on observations
  double drift_prob = 0.0;        // extra displacement along current heading
};

struct RewardWrapper {
  double velocity_penalty_coeff = 0.0;
};

struct EnvConfig {
  EnvKind kind = EnvKind::DiscreteGather;
  int size = 8;       // grid side (gather) or chain length (blocks)
  int horizon = 400;  // blocks default is 200; set by callers/config files

  // gather
  int n_apples = 5;
  int n_bombs = 5;
  int lidar_bins = 8;

  // blocks
  int wall_spacing = 8;
  int max_wall_height = 4;
  bool continuous = false;  // blocks only: 1-d force actions

  Dynamics dynamics;
  RewardWrapper wrapper;

  void validate() const {
    if (horizon < 1) throw ConfigError("env horizon must be >= 1");
    if (size < 2) throw ConfigError("env size must be >= 2");
    auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob_ok(dynamics.action_fail_prob) || !prob_ok(dynamics.drift_prob))
      throw ConfigError("env probabilities must be in [0,1]");
    if (dynamics.effect_scale <= 0.0) throw ConfigError("effect_scale must be > 0");
    if (dynamics.obs_noise_std < 0.0) throw ConfigError("obs_noise_std must be >= 0");
    if (wrapper.velocity_penalty_coeff < 0.0)
      throw ConfigError("velocity penalty coefficient must be >= 0");
    if (kind == EnvKind::DiscreteGather) {
      if (n_apples < 0 || n_bombs < 0) throw ConfigError("object counts must be >= 0");
      if (lidar_bins < 1) throw ConfigError("lidar_bins must be >= 1");
      if (continuous) throw ConfigError("gather has no continuous-action variant");
    } else {
      if (wall_spacing < 2) throw ConfigError("wall_spacing must be >= 2");
      if (max_wall_height < 1) throw ConfigError("max_wall_height must be >= 1");
    }
  }
};

struct StepResult {
  Observation obs;
  double reward = 0.0;
  bool done = false;
  std::map<std::string, double> info;
};

// reward' = reward - coeff * |velocity|; coeff = 0 reproduces the base reward.
inline StepResult wrap_reward(StepResult result, const RewardWrapper& wrapper,
                              double velocity) {
  if (wrapper.velocity_penalty_coeff < 0.0)
    throw ArgumentError("wrap_reward: negative coefficient");
  result.reward -= wrapper.velocity_penalty_coeff * std::abs(velocity);
  return result;
}

// Named dynamics modification; each name maps to exactly one Dynamics field.
struct PerturbationSpec {
  std::string name;  // mass | dampening | inertia | friction
  double magnitude = 0.0;
};

inline const std::vector<std::string>& perturbation_names() {
  static const std::vector<std::string> names = {"mass", "dampening", "inertia", "friction"};
  return names;
}

// Returns a config differing from `base` in the one mapped dynamics field:
//   mass      -> effect_scale down (x (1 - magnitude))
//   dampening -> action_fail_prob up (+ magnitude)
//   inertia   -> drift_prob up (+ magnitude)
//   friction  -> obs_noise_std up (+ magnitude)
inline EnvConfig perturb(const EnvConfig& base, const PerturbationSpec& spec) {
  EnvConfig cfg = base;
  if (spec.name == "mass") {
    if (spec.magnitude < 0.0 || spec.magnitude >= 1.0)
      throw ArgumentError("mass magnitude must be in [0,1)");
    cfg.dynamics.effect_scale = base.dynamics.effect_scale * (1.0 - spec.magnitude);
  } else if (spec.name == "dampening") {
    if (spec.magnitude < 0.0 || base.dynamics.action_fail_prob + spec.magnitude > 1.0)
      throw ArgumentError("dampening magnitude out of range");
    cfg.dynamics.action_fail_prob = base.dynamics.action_fail_prob + spec.magnitude;
  } else if (spec.name == "inertia") {
    if (spec.magnitude < 0.0 || base.dynamics.drift_prob + spec.magnitude > 1.0)
      throw ArgumentError("inertia magnitude out of range");
    cfg.dynamics.drift_prob = base.dynamics.drift_prob + spec.magnitude;
  } else if (spec.name == "friction") {
    if (spec.magnitude < 0.0) throw ArgumentError("friction magnitude must be >= 0");
    cfg.dynamics.obs_noise_std = base.dynamics.obs_noise_std + spec.magnitude;
  } else {
    throw ArgumentError("unknown perturbation name: " + spec.name);
  }
  return cfg;
}

// Environment action. Discrete kinds use `id`; the continuous blocks variant
// uses `force` (1-d).
struct Action {
  int id = -1;
  std::vector<double> force;
};

struct EnvActionSpace {
  bool is_categorical = true;
  int dim = 1;  // number of discrete actions, or force dimension
};

// -- gather grid geometry -- //

// 8 compass directions, 45 degrees apart, index 0 = +x, counterclockwise.
inline constexpr int kGatherDirections = 8;
inline constexpr int kGatherStayAction = 8;  // action ids 0..7 move, 8 stays

inline void gather_direction(int k, int& dx, int& dy) {
  static constexpr int table[8][2] = {{1, 0},  {1, 1},   {0, 1},  {-1, 1},
                                      {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  dx = table[k][0];
  dy = table[k][1];
}

inline int gather_obs_dim(const EnvConfig& cfg) {
  return kGatherDirections + 2 * cfg.lidar_bins;
}
inline int blocks_obs_dim(const EnvConfig&) { return 4; }

inline int env_obs_dim(const EnvConfig& cfg) {
  return cfg.kind == EnvKind::DiscreteGather ? gather_obs_dim(cfg) : blocks_obs_dim(cfg);
}

inline int env_proprio_dim(const EnvConfig& cfg) {
  return cfg.kind == EnvKind::DiscreteGather ? kGatherDirections : blocks_obs_dim(cfg);
}

inline EnvActionSpace env_action_space(const EnvConfig& cfg) {
  if (cfg.kind == EnvKind::DiscreteGather) return {true, kGatherDirections + 1};
  if (cfg.continuous) return {false, 1};
  return {true, 2 + cfg.max_wall_height};
}

// Deterministic seeded episode: same (config, seed) gives the same layout and,
// with the same action sequence, the same step results. One instance = one
// episode; construct a fresh one to reset.
class Env {
 public:
  Env(const EnvConfig& config, uint64_t seed)
      : config_(config), seed_(seed), rng_(derive_seed(seed, 0xe9u)) {
    config_.validate();
    if (config_.kind == EnvKind::DiscreteGather) {
      reset_gather();
    } else {
      reset_blocks();
    }
    obs_ = make_obs();
  }

  const EnvConfig& config() const { return config_; }
  uint64_t seed() const { return seed_; }
  const Observation& obs() const { return obs_; }
  bool done() const { return done_; }
  int t() const { return t_; }
  int obs_dim() const { return env_obs_dim(config_); }
  EnvActionSpace action_space() const { return env_action_space(config_); }

  StepResult step(const Action& action) {
    if (done_) throw UsageError("step called on finished episode");
    StepResult result;
    double velocity = 0.0;
    if (config_.kind == EnvKind::DiscreteGather) {
      result.reward = step_gather(action, velocity);
    } else {
      result.reward = step_blocks(action, velocity);
    }
    ++t_;
    if (t_ >= config_.horizon) done_ = true;
    result.done = done_;
    obs_ = make_obs();
    result.obs = obs_;
    result.info["velocity"] = velocity;
    if (config_.kind == EnvKind::DiscreteGather) {
      result.info["apples_left"] = static_cast<double>(apples_.size());
      result.info["bombs_left"] = static_cast<double>(bombs_.size());
    } else {
      result.info["walls_cleared"] = walls_cleared_;
      result.info["fell"] = fell_ ? 1.0 : 0.0;
    }
    result = wrap_reward(std::move(result), config_.wrapper, velocity);
    return result;
  }

 private:
  struct Cell {
    int x = 0, y = 0;
    bool operator==(const Cell&) const = default;
  };

  void reset_gather() {
    int cells = config_.size * config_.size;
    if (config_.n_apples + config_.n_bombs + 1 > cells)
      throw ConfigError("gather: more objects than grid cells");
    agent_ = {rng_.uniform_int(0, config_.size - 1), rng_.uniform_int(0, config_.size - 1)};
    auto occupied = [&](const Cell& c) {
      if (c == agent_) return true;
      for (const auto& a : apples_)
        if (a == c) return true;
      for (const auto& b : bombs_)
        if (b == c) return true;
      return false;
    };
    auto place = [&]() {
      for (;;) {
        Cell c{rng_.uniform_int(0, config_.size - 1), rng_.uniform_int(0, config_.size - 1)};
        if (!occupied(c)) return c;
      }
    };
    for (int i = 0; i < config_.n_apples; ++i) apples_.push_back(place());
    for (int i = 0; i < config_.n_bombs; ++i) bombs_.push_back(place());
    heading_ = -1;
  }

  void reset_blocks() {
    for (int x = config_.wall_spacing; x < config_.size; x += config_.wall_spacing)
      walls_.push_back({x, rng_.uniform_int(1, config_.max_wall_height), false});
    x_ = 0;
    last_dx_ = 0;
    prev_wall_height_ = 0;
  }

  // One unit of displacement, collecting any object on the entered cell.
  double move_gather_unit(int dx, int dy, double& velocity) {
    int nx = std::clamp(agent_.x + dx, 0, config_.size - 1);
    int ny = std::clamp(agent_.y + dy, 0, config_.size - 1);
    double dist = std::hypot(static_cast<double>(nx - agent_.x),
                             static_cast<double>(ny - agent_.y));
    agent_ = {nx, ny};
    velocity += dist;
    for (size_t i = 0; i < apples_.size(); ++i) {
      if (apples_[i] == agent_) {
        apples_.erase(apples_.begin() + i);
        return 1.0;
      }
    }
    for (size_t i = 0; i < bombs_.size(); ++i) {
      if (bombs_[i] == agent_) {
        bombs_.erase(bombs_.begin() + i);
        return -1.0;
      }
    }
    return 0.0;
  }

  double step_gather(const Action& action, double& velocity) {
    if (action.id < 0 || action.id > kGatherStayAction)
      throw ArgumentError("gather action id out of range");
    double reward = 0.0;
    int dir = action.id;
    if (dir != kGatherStayAction && !rng_.bernoulli(config_.dynamics.action_fail_prob)) {
      int dx, dy;
      gather_direction(dir, dx, dy);
      heading_ = dir;
      // effect_scale < 1: the move sometimes fails to carry; > 1: extra cell
      double scale = config_.dynamics.effect_scale;
      int cells = static_cast<int>(scale);
      if (rng_.uniform() < scale - cells) ++cells;
      for (int c = 0; c < cells; ++c) reward += move_gather_unit(dx, dy, velocity);
    }
    if (heading_ >= 0 && rng_.bernoulli(config_.dynamics.drift_prob)) {
      int dx, dy;
      gather_direction(heading_, dx, dy);
      reward += move_gather_unit(dx, dy, velocity);
    }
    return reward;
  }

  struct Wall {
    int x = 0;
    int height = 0;
    bool cleared = false;
  };

  Wall* wall_at(int x) {
    for (auto& w : walls_) {
      if (w.x == x && !w.cleared) return &w;
    }
    return nullptr;
  }

  static constexpr double kFallProb = 0.25;  // stumble on a mis-powered jump

  // Move one cell in direction dir if not blocked by an uncleared wall.
  void move_blocks_unit(int dir, double& velocity) {
    int nx = std::clamp(x_ + dir, 0, config_.size - 1);
    if (nx != x_ && wall_at(nx) == nullptr) {
      velocity += std::abs(nx - x_);
      x_ = nx;
      last_dx_ = dir;
    }
  }

  double step_blocks(const Action& action, double& velocity) {
    double reward = 0.0;
    bool fail = rng_.bernoulli(config_.dynamics.action_fail_prob);
    int move = 0;    // -1 left, +1 right, 0 none
    int power = 0;   // jump power; 0 = not a jump
    if (config_.continuous) {
      if (action.force.size() != 1) throw ArgumentError("blocks force must be 1-d");
      double f = action.force[0] * config_.dynamics.effect_scale;
      if (f >= 0.5) {
        if (wall_at(x_ + 1) != nullptr) {
          power = std::max(1, static_cast<int>(std::lround(f)));
        } else {
          move = 1;
        }
      } else if (f <= -0.5) {
        move = -1;
      }
    } else {
      int m = 2 + config_.max_wall_height;
      if (action.id < 0 || action.id >= m) throw ArgumentError("blocks action id out of range");
      if (action.id == 0) {
        move = -1;
      } else if (action.id == 1) {
        move = 1;
      } else {
        power = action.id - 1;  // jump(1..max_wall_height)
        // mass perturbation: weakened jumps lose one unit of power
        if (!rng_.bernoulli(std::min(1.0, config_.dynamics.effect_scale))) power -= 1;
      }
    }
    if (!fail) {
      if (power > 0) {
        Wall* w = wall_at(x_ + 1);
        if (w != nullptr) {
          if (power == w->height) {
            w->cleared = true;
            prev_wall_height_ = w->height;
            walls_cleared_ += 1.0;
            reward = 1.0;
            int nx = std::min(x_ + 2, config_.size - 1);
            velocity += nx - x_;
            x_ = nx;
            last_dx_ = 1;
          } else if (rng_.bernoulli(kFallProb)) {
            fell_ = true;
            done_ = true;
          }
        } else {
          move_blocks_unit(1, velocity);  // jump in the open is a forward hop
        }
      } else if (move != 0) {
        move_blocks_unit(move, velocity);
      }
    }
    if (!done_ && last_dx_ != 0 && rng_.bernoulli(config_.dynamics.drift_prob))
      move_blocks_unit(last_dx_, velocity);
    if (x_ >= config_.size - 1) done_ = true;  // end of chain
    return reward;
  }

  Observation make_obs() {
    Observation obs;
    if (config_.kind == EnvKind::DiscreteGather) {
      obs.assign(gather_obs_dim(config_), 0.0);
      if (heading_ >= 0) obs[heading_] = 1.0;
      double max_range = config_.size * std::sqrt(2.0);
      auto fill_lidar = [&](const std::vector<Cell>& objects, int offset) {
        for (int b = 0; b < config_.lidar_bins; ++b) obs[offset + b] = 1.0;
        for (const auto& c : objects) {
          double dx = c.x - agent_.x, dy = c.y - agent_.y;
          double dist = std::hypot(dx, dy);
          if (dist == 0.0) continue;
          double angle = std::atan2(dy, dx);
          int bin = static_cast<int>(std::lround(angle / (2.0 * M_PI) * config_.lidar_bins));
          bin = ((bin % config_.lidar_bins) + config_.lidar_bins) % config_.lidar_bins;
          obs[offset + bin] = std::min(obs[offset + bin], dist / max_range);
        }
      };
      fill_lidar(apples_, kGatherDirections);
      fill_lidar(bombs_, kGatherDirections + config_.lidar_bins);
    } else {
      obs.assign(blocks_obs_dim(config_), 0.0);
      obs[0] = static_cast<double>(x_ % config_.wall_spacing) / config_.wall_spacing;
      obs[1] = static_cast<double>(last_dx_) / 2.0;
      int next_h = 0;
      for (const auto& w : walls_) {
        if (!w.cleared && w.x > x_) {
          next_h = w.height;
          break;
        }
      }
      obs[2] = static_cast<double>(next_h) / config_.max_wall_height;
      obs[3] = static_cast<double>(prev_wall_height_) / config_.max_wall_height;
    }
    if (config_.dynamics.obs_noise_std > 0.0) {
      for (double& v : obs) v += rng_.normal(0.0, config_.dynamics.obs_noise_std);
      // keep the lidar block inside [0,1]
      int proprio = env_proprio_dim(config_);
      for (size_t i = proprio; i < obs.size(); ++i) obs[i] = std::clamp(obs[i], 0.0, 1.0);
    }
    return obs;
  }

  EnvConfig config_;
  uint64_t seed_;
  Rng rng_;
  Observation obs_;
  bool done_ = false;
  bool fell_ = false;
  int t_ = 0;

  // gather state
  Cell agent_;
  std::vector<Cell> apples_, bombs_;
  int heading_ = -1;

  // blocks state
  std::vector<Wall> walls_;
  int x_ = 0;
  int last_dx_ = 0;
  int prev_wall_height_ = 0;
  double walls_cleared_ = 0.0;
};

// Spec-style reset entry point.
inline Env reset(const EnvConfig& config, uint64_t seed) { return Env(config, seed); }

}  // namespace hippo
