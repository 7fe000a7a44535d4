#pragma once

#include <memory>
#include <span>
#include <vector>

#include "env/attention.hpp"
#include "env/environment.hpp"
#include "nn/layers.hpp"
#include "nn/param_store.hpp"
#include "nn/rng.hpp"

namespace roomsrl::policy {

struct MetaAction {
    int subgoal = 0;  // color index in [0,3]
    env::AttentionAction attention = env::AttentionAction::Noop;
    double joint_log_prob = 0.0;
};

// Samples the two heads independently; the joint log-prob is the sum.
MetaAction select_action(std::span<const double> p_g, std::span<const double> p_a,
                         nn::RandomStream& rng);

struct HeadDistributions {
    std::vector<double> subgoal;    // 4 probabilities
    std::vector<double> attention;  // 3 probabilities; empty for feedforward nets
};

// Policy network with an episode tape: step() records everything
// backward() needs to push REINFORCE gradients through the episode.
class Controller {
public:
    virtual ~Controller() = default;

    // Clears the tape and zeroes any recurrent state.
    virtual void begin_episode() = 0;

    virtual MetaAction step(const env::Observation& obs, env::AttentionWindow window,
                            nn::RandomStream& rng) = 0;

    // Accumulates gradients of -sum_t coeffs[t] * joint_log_prob_t into the
    // parameter store; coeffs has one entry per step since begin_episode().
    virtual void backward(const std::vector<double>& coeffs) = 0;

    virtual nn::ParamStore& params() = 0;
    virtual const nn::ParamStore& params() const = 0;
    virtual bool uses_attention() const = 0;
    virtual std::size_t episode_steps() const = 0;
};

// Conv -> ReLU -> concat instruction -> FC -> ReLU -> LSTM -> two softmax
// heads, fed the 5x5 attention crop each step.
class AttentionController final : public Controller {
public:
    static constexpr std::size_t kKernel = 3;
    static constexpr std::size_t kConvFilters = 8;
    static constexpr std::size_t kHiddenSize = 32;

    explicit AttentionController(nn::RandomStream init_rng, double init_scale = 0.1);

    void begin_episode() override;
    MetaAction step(const env::Observation& obs, env::AttentionWindow window,
                    nn::RandomStream& rng) override;
    void backward(const std::vector<double>& coeffs) override;
    nn::ParamStore& params() override { return store_; }
    const nn::ParamStore& params() const override { return store_; }
    bool uses_attention() const override { return true; }
    std::size_t episode_steps() const override { return tape_.size(); }

    // Pure forward step: advances `state`, touches no tape. Lets tests
    // re-evaluate an episode with fixed action indices.
    HeadDistributions forward(const nn::Tensor& crop, std::span<const double> instruction,
                              nn::LstmCell::State& state) const;

    nn::LstmCell::State zero_state() const { return lstm_.zero_state(); }

private:
    struct StepTape {
        nn::Conv2dLayer::Cache conv_cache;
        nn::Tensor conv_pre;
        nn::DenseLayer::Cache fc_cache;
        std::vector<double> fc_pre;
        nn::LstmCell::Cache lstm_cache;
        nn::DenseLayer::Cache head_g_cache, head_a_cache;
        std::vector<double> p_g, p_a;
        std::size_t idx_g = 0, idx_a = 0;
    };

    HeadDistributions run(const nn::Tensor& crop, std::span<const double> instruction,
                          nn::LstmCell::State& state, StepTape& tape) const;

    nn::Conv2dLayer conv_;
    nn::DenseLayer fc_;
    nn::LstmCell lstm_;
    nn::DenseLayer head_g_, head_a_;
    nn::ParamStore store_;
    nn::LstmCell::State hidden_;
    std::vector<StepTape> tape_;
};

// Feedforward variant over the full 10x5 image: the environment is fully
// observed, so there is no recurrence and no attention head.
class FeedforwardController final : public Controller {
public:
    static constexpr std::size_t kKernel = 3;
    static constexpr std::size_t kConvFilters = 8;
    static constexpr std::size_t kHiddenSize = 32;

    explicit FeedforwardController(nn::RandomStream init_rng, double init_scale = 0.1);

    void begin_episode() override;
    MetaAction step(const env::Observation& obs, env::AttentionWindow window,
                    nn::RandomStream& rng) override;
    void backward(const std::vector<double>& coeffs) override;
    nn::ParamStore& params() override { return store_; }
    const nn::ParamStore& params() const override { return store_; }
    bool uses_attention() const override { return false; }
    std::size_t episode_steps() const override { return tape_.size(); }

    // Pure forward pass over the full image.
    HeadDistributions forward(const nn::Tensor& image,
                              std::span<const double> instruction) const;

private:
    struct StepTape {
        nn::Conv2dLayer::Cache conv_cache;
        nn::Tensor conv_pre;
        nn::DenseLayer::Cache fc_cache;
        std::vector<double> fc_pre;
        nn::DenseLayer::Cache head_g_cache;
        std::vector<double> p_g;
        std::size_t idx_g = 0;
    };

    std::vector<double> run(const nn::Tensor& image, std::span<const double> instruction,
                            StepTape& tape) const;

    nn::Conv2dLayer conv_;
    nn::DenseLayer fc_;
    nn::DenseLayer head_g_;
    nn::ParamStore store_;
    std::vector<StepTape> tape_;
};

std::unique_ptr<Controller> make_controller(bool use_attention, nn::RandomStream init_rng,
                                            double init_scale = 0.1);

}  // namespace roomsrl::policy
