#pragma once

// Two-armed softmax bandit built on the library's numeric primitives.
// Arm 0 pays 1.0, arm 1 pays 0.0; the policy is softmax over two logits.
// Small enough that expected gradients can be enumerated exactly.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "nn/adam.hpp"
#include "nn/layers.hpp"
#include "nn/param_store.hpp"
#include "nn/rng.hpp"
#include "nn/tensor.hpp"

namespace testsupport {

inline constexpr std::array<double, 2> kBanditRewards{1.0, 0.0};

inline std::array<double, 2> bandit_probs(const roomsrl::nn::Tensor& logits) {
    const std::vector<double> p = roomsrl::nn::softmax(logits.values());
    return {p[0], p[1]};
}

// Exact E[dL/dlogits] for surrogate loss -log pi(a) * (R(a) - b),
// summing over both arms weighted by their probability.
inline std::array<double, 2> expected_bandit_gradient(const roomsrl::nn::Tensor& logits,
                                                      double baseline) {
    const std::array<double, 2> p = bandit_probs(logits);
    std::array<double, 2> grad{0.0, 0.0};
    for (std::size_t arm = 0; arm < 2; ++arm) {
        const std::vector<double> d = roomsrl::nn::log_softmax_grad(
            std::vector<double>{p[0], p[1]}, arm, -(kBanditRewards[arm] - baseline));
        grad[0] += p[arm] * d[0];
        grad[1] += p[arm] * d[1];
    }
    return grad;
}

// One-episode-per-update REINFORCE on the bandit. Returns P(arm 0) after
// `episodes` updates.
inline double train_bandit(double learning_rate, int episodes, std::uint64_t seed) {
    roomsrl::nn::Tensor logits({2});
    roomsrl::nn::Tensor grads({2});
    roomsrl::nn::ParamStore store;
    store.add("logits", &logits, &grads);
    roomsrl::nn::AdamConfig adam_config;
    adam_config.learning_rate = learning_rate;
    roomsrl::nn::AdamOptimizer adam(store, adam_config);
    roomsrl::nn::RandomStream rng(seed);
    for (int episode = 0; episode < episodes; ++episode) {
        const std::array<double, 2> p = bandit_probs(logits);
        const std::vector<double> probs{p[0], p[1]};
        const auto draw = roomsrl::nn::sample_categorical(probs, rng);
        const std::vector<double> d =
            roomsrl::nn::log_softmax_grad(probs, draw.index, -kBanditRewards[draw.index]);
        grads[0] += d[0];
        grads[1] += d[1];
        adam.step(store);
    }
    return bandit_probs(logits)[0];
}

}  // namespace testsupport
