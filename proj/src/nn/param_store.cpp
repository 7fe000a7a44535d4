#include "nn/param_store.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace roomsrl::nn {

void ParamStore::add(std::string name, Tensor* value, Tensor* grad) {
    if (value == nullptr || grad == nullptr) {
        throw std::invalid_argument("ParamStore::add: null tensor");
    }
    if (!value->same_shape(*grad)) {
        throw std::invalid_argument("ParamStore::add: gradient shape mismatch for '" + name + "'");
    }
    if (find(name) != nullptr) {
        throw std::invalid_argument("ParamStore::add: duplicate parameter '" + name + "'");
    }
    entries_.push_back({std::move(name), value, grad});
}

std::size_t ParamStore::parameter_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.value->size();
    return n;
}

const ParamStore::Entry* ParamStore::find(std::string_view name) const {
    for (const auto& e : entries_) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

void ParamStore::zero_grads() {
    for (auto& e : entries_) e.grad->fill(0.0);
}

std::string ParamStore::first_non_finite_grad() const {
    for (const auto& e : entries_) {
        if (!e.grad->all_finite()) return e.name;
    }
    return {};
}

void ParamStore::scale_grads(double factor) {
    for (auto& e : entries_) {
        for (double& g : *e.grad) g *= factor;
    }
}

double ParamStore::grad_l2_norm() const {
    double sq = 0.0;
    for (const auto& e : entries_) {
        for (double g : *e.grad) sq += g * g;
    }
    return std::sqrt(sq);
}

}  // namespace roomsrl::nn
