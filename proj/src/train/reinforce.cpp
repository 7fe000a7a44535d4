#include "train/reinforce.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "errors.hpp"
#include "nn/adam.hpp"

namespace roomsrl::train {

std::vector<double> compute_returns(const std::vector<double>& rewards) {
    if (rewards.empty()) throw std::invalid_argument("rewards must be nonempty");
    std::vector<double> returns(rewards.size());
    double running = 0.0;
    for (std::size_t t = rewards.size(); t-- > 0;) {
        running += rewards[t];
        returns[t] = running;
    }
    return returns;
}

BaselineBuffer::BaselineBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("capacity must be positive");
    values_.reserve(capacity_);
}

void BaselineBuffer::push(double value) {
    if (values_.size() < capacity_) {
        values_.push_back(value);
    } else {
        values_[next_] = value;
    }
    next_ = (next_ + 1) % capacity_;
}

double BaselineBuffer::mean() const {
    if (values_.empty()) return 0.0;
    double sum = 0.0;
    for (const double v : values_) sum += v;
    return sum / static_cast<double>(values_.size());
}

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0)) throw ConfigError("learning rate must be non-negative");
    if (batch_size <= 0) throw ConfigError("batch size must be positive");
    if (total_episodes < 0) throw ConfigError("episode count must be nonnegative");
    if (timeout <= 0) throw ConfigError("timeout must be positive");
}

RolloutResult rollout_episode(policy::Controller& controller, env::LayoutMode layout_mode,
                              agent::GatingMode gating, int timeout, nn::RandomStream& rng) {
    controller.begin_episode();
    env::GridState state = env::reset(layout_mode, rng);
    env::AttentionWindow window{0};
    RolloutResult result;
    while (true) {
        const env::Observation obs = env::render(state);
        const policy::MetaAction action = controller.step(obs, window, rng);
        const int delta =
            agent::act(gating, state, window, static_cast<env::Color>(action.subgoal));
        const env::StepOutcome outcome = env::apply_agent_move(state, delta, timeout);
        window = env::apply_attention_action(window, action.attention);
        result.trajectory.log_probs.push_back(action.joint_log_prob);
        result.trajectory.rewards.push_back(outcome.reward);
        if (outcome.done) {
            result.success = outcome.success;
            break;
        }
    }
    result.length = state.steps_taken;
    result.episode_return = result.success
                                ? 1.0 - 0.01 * static_cast<double>(result.length - 1)
                                : -0.01 * static_cast<double>(result.length);
    return result;
}

void accumulate_policy_gradient(policy::Controller& controller, const Trajectory& trajectory,
                                double baseline) {
    const std::vector<double> returns = compute_returns(trajectory.rewards);
    std::vector<double> coeffs(returns.size());
    for (std::size_t t = 0; t < returns.size(); ++t) coeffs[t] = returns[t] - baseline;
    controller.backward(coeffs);
}

TrainResult train(const TrainConfig& config, policy::Controller& controller,
                  const EpisodeSink& sink) {
    config.validate();
    const nn::RandomStream master(config.seed);
    nn::ParamStore& params = controller.params();
    nn::AdamOptimizer adam(params, nn::AdamConfig{config.learning_rate});
    BaselineBuffer baseline_buffer;
    std::deque<int> window_lengths;

    params.zero_grads();
    int episode = 0;
    while (episode < config.total_episodes) {
        const int batch =
            std::min(config.batch_size, config.total_episodes - episode);
        const double baseline = baseline_buffer.mean();
        for (int b = 0; b < batch; ++b, ++episode) {
            nn::RandomStream rng = master.split(static_cast<std::uint64_t>(episode) + 1);
            const RolloutResult rollout =
                rollout_episode(controller, config.layout_mode, config.gating,
                                config.timeout, rng);
            accumulate_policy_gradient(controller, rollout.trajectory, baseline);
            if (config.baseline_source == BaselineSource::EpisodeReturns) {
                baseline_buffer.push(rollout.episode_return);
            } else {
                for (const double r : rollout.trajectory.rewards) baseline_buffer.push(r);
            }
            window_lengths.push_back(rollout.length);
            if (window_lengths.size() > 100) window_lengths.pop_front();
            if (sink) {
                sink(EpisodeRecord{episode, rollout.length, rollout.episode_return,
                                   rollout.success, baseline});
            }
        }
        params.scale_grads(1.0 / static_cast<double>(batch));
        if (config.grad_clip > 0.0) {
            const double norm = params.grad_l2_norm();
            if (norm > config.grad_clip) params.scale_grads(config.grad_clip / norm);
        }
        adam.step(params);
    }

    TrainResult result;
    result.episodes = episode;
    if (!window_lengths.empty()) {
        double mean = 0.0;
        for (const int len : window_lengths) mean += len;
        mean /= static_cast<double>(window_lengths.size());
        double var = 0.0;
        for (const int len : window_lengths) {
            const double d = static_cast<double>(len) - mean;
            var += d * d;
        }
        var /= static_cast<double>(window_lengths.size());
        result.final_window_mean_length = mean;
        result.final_window_length_variance = var;
    }
    return result;
}

}  // namespace roomsrl::train
