#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace roomsrl::nn {

// Dense row-major tensor of doubles. Shapes are fixed at construction;
// all layer code in this library works on rank 1..4 tensors.
class Tensor {
public:
    Tensor() = default;

    // Zero-filled tensor of the given shape.
    explicit Tensor(std::vector<std::size_t> shape);

    static Tensor from(std::vector<std::size_t> shape, std::vector<double> values);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    std::size_t extent(std::size_t dim) const { return shape_[dim]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& at(std::size_t i, std::size_t j) { return data_[i * stride_[0] + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * stride_[0] + j]; }
    double& at(std::size_t i, std::size_t j, std::size_t k) {
        return data_[i * stride_[0] + j * stride_[1] + k];
    }
    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[i * stride_[0] + j * stride_[1] + k];
    }
    double& at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return data_[i * stride_[0] + j * stride_[1] + k * stride_[2] + l];
    }
    double at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return data_[i * stride_[0] + j * stride_[1] + k * stride_[2] + l];
    }

    void fill(double v);
    bool all_finite() const;
    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

private:
    void compute_strides();

    std::vector<std::size_t> shape_;
    std::vector<std::size_t> stride_;  // strides for dims [0, rank-1); last dim has stride 1
    std::vector<double> data_;
};

}  // namespace roomsrl::nn
