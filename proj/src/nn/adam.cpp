#include "nn/adam.hpp"

#include <cmath>
#include <stdexcept>

#include "errors.hpp"

namespace roomsrl::nn {

namespace {

void require_unit_interval(double value, const char* name) {
    if (!(value > 0.0 && value < 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
    }
}

}  // namespace

AdamOptimizer::AdamOptimizer(const ParamStore& store, AdamConfig config)
    : config_(config) {
    if (!(config_.learning_rate >= 0.0)) {
        throw std::invalid_argument("learning_rate must be non-negative");
    }
    require_unit_interval(config_.beta1, "beta1");
    require_unit_interval(config_.beta2, "beta2");
    if (!(config_.epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    m_.reserve(store.entries().size());
    v_.reserve(store.entries().size());
    for (const auto& entry : store.entries()) {
        Tensor zeros(entry.value->shape());
        m_.push_back(zeros);
        v_.push_back(std::move(zeros));
    }
}

void AdamOptimizer::step(ParamStore& store) {
    const auto& entries = store.entries();
    if (entries.size() != m_.size()) {
        throw std::invalid_argument("optimizer was built for a different parameter set");
    }
    if (const std::string bad = store.first_non_finite_grad(); !bad.empty()) {
        throw NumericError("non-finite gradient in parameter '" + bad + "'");
    }
    ++t_;
    const double correction1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double correction2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Tensor& value = *entries[i].value;
        Tensor& grad = *entries[i].grad;
        Tensor& m = m_[i];
        Tensor& v = v_[i];
        for (std::size_t j = 0; j < value.size(); ++j) {
            const double g = grad[j];
            m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g;
            v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g * g;
            const double m_hat = m[j] / correction1;
            const double v_hat = v[j] / correction2;
            value[j] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
        grad.fill(0.0);
    }
}

}  // namespace roomsrl::nn
