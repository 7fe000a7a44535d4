#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nn/tensor.hpp"

namespace roomsrl::nn {

// Registry of named parameter tensors with their gradient accumulators.
// The store does not own the tensors; layers register views into their
// own members. Registration order is the canonical iteration order used
// by the optimizer, checkpointing, and finite-difference checks.
class ParamStore {
public:
    struct Entry {
        std::string name;
        Tensor* value;
        Tensor* grad;
    };

    // Requires grad shape to match the parameter's shape.
    void add(std::string name, Tensor* value, Tensor* grad);

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t parameter_count() const;

    const Entry* find(std::string_view name) const;

    void zero_grads();

    // Name of the first parameter holding a non-finite gradient entry,
    // or empty when all gradients are finite.
    std::string first_non_finite_grad() const;

    // In-place scale of every gradient (batch averaging, norm clipping).
    void scale_grads(double factor);

    double grad_l2_norm() const;

private:
    std::vector<Entry> entries_;
};

}  // namespace roomsrl::nn
