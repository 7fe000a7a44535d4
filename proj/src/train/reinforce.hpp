#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "agent/oracle.hpp"
#include "env/environment.hpp"
#include "policy/meta_controller.hpp"

namespace roomsrl::train {

// The paper's learning rate, read literally: 1 x e^-5.
inline const double kDefaultLearningRate = std::exp(-5.0);

struct Trajectory {
    std::vector<double> log_probs;  // per-step joint log pi
    std::vector<double> rewards;    // per-step r_t
};

// Undiscounted reward-to-go: R_t = sum_{k>=t} r_k.
std::vector<double> compute_returns(const std::vector<double>& rewards);

// Ring buffer of recent values backing the moving-average baseline.
class BaselineBuffer {
public:
    explicit BaselineBuffer(std::size_t capacity = 100);

    void push(double value);

    // Mean of stored values; 0 when empty.
    double mean() const;

    std::size_t size() const { return values_.size(); }
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<double> values_;
};

// What feeds the baseline buffer: whole-episode returns (default) or raw
// step rewards (the alternative reading of the paper's b_t formula).
enum class BaselineSource { EpisodeReturns, StepRewards };

struct TrainConfig {
    double learning_rate = kDefaultLearningRate;
    int batch_size = 16;
    int total_episodes = 20000;
    int timeout = env::kDefaultTimeout;
    agent::GatingMode gating = agent::GatingMode::Unconstrained;
    env::LayoutMode layout_mode = env::LayoutMode::Fixed;
    bool use_attention = false;
    std::uint64_t seed = 0;
    double grad_clip = 10.0;  // L2 norm cap; <= 0 disables
    BaselineSource baseline_source = BaselineSource::EpisodeReturns;

    // Throws ConfigError on out-of-range values.
    void validate() const;
};

struct RolloutResult {
    Trajectory trajectory;
    int length = 0;
    bool success = false;
    double episode_return = 0.0;
};

// One episode under the current policy: render, step the controller, gate
// the oracle, move the agent, then move the window.
RolloutResult rollout_episode(policy::Controller& controller, env::LayoutMode layout_mode,
                              agent::GatingMode gating, int timeout, nn::RandomStream& rng);

// Accumulates gradients of -sum_t log pi_t * (R_t - baseline) into the
// controller's parameter store. The advantage is treated as a constant.
void accumulate_policy_gradient(policy::Controller& controller, const Trajectory& trajectory,
                                double baseline);

struct EpisodeRecord {
    int episode = 0;
    int length = 0;
    double episode_return = 0.0;
    bool success = false;
    double baseline = 0.0;
};

using EpisodeSink = std::function<void(const EpisodeRecord&)>;

struct TrainResult {
    int episodes = 0;
    double final_window_mean_length = 0.0;
    double final_window_length_variance = 0.0;
};

// REINFORCE with a per-batch fixed baseline: roll out a batch, average its
// gradients, clip, Adam step, then feed the baseline buffer. Emits one
// record per episode as it completes. Deterministic given (config, seed):
// episode i always uses the stream split(i+1) of the master seed.
TrainResult train(const TrainConfig& config, policy::Controller& controller,
                  const EpisodeSink& sink = nullptr);

}  // namespace roomsrl::train
