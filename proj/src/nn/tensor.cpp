#include "nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace roomsrl::nn {

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
    const std::size_t n = std::accumulate(shape_.begin(), shape_.end(),
                                          std::size_t{1}, std::multiplies<>());
    data_.assign(n, 0.0);
    compute_strides();
}

Tensor Tensor::from(std::vector<std::size_t> shape, std::vector<double> values) {
    Tensor t;
    t.shape_ = std::move(shape);
    const std::size_t n = std::accumulate(t.shape_.begin(), t.shape_.end(),
                                          std::size_t{1}, std::multiplies<>());
    if (n != values.size()) {
        throw std::invalid_argument("Tensor::from: shape does not match value count");
    }
    t.data_ = std::move(values);
    t.compute_strides();
    return t;
}

void Tensor::compute_strides() {
    stride_.assign(shape_.empty() ? 0 : shape_.size() - 1, 1);
    for (std::size_t d = stride_.size(); d-- > 0;) {
        const std::size_t next = (d + 1 < stride_.size()) ? stride_[d + 1] : 1;
        stride_[d] = next * shape_[d + 1];
    }
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

}  // namespace roomsrl::nn
