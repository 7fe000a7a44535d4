#pragma once

#include <cstdint>
#include <vector>

#include "nn/param_store.hpp"

namespace roomsrl::nn {

struct AdamConfig {
    double learning_rate = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Adam with bias correction. Moment tensors are kept per store entry in
// registration order; the step consumes and zeroes the accumulated
// gradients.
class AdamOptimizer {
public:
    AdamOptimizer(const ParamStore& store, AdamConfig config);

    // Throws NumericError naming the offending parameter if any gradient
    // entry is non-finite.
    void step(ParamStore& store);

    std::int64_t steps_taken() const { return t_; }
    const AdamConfig& config() const { return config_; }

private:
    AdamConfig config_;
    std::int64_t t_ = 0;
    std::vector<Tensor> m_, v_;
};

}  // namespace roomsrl::nn
