#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nn/param_store.hpp"
#include "nn/rng.hpp"
#include "nn/tensor.hpp"

namespace roomsrl::nn {

// ---------------------------------------------------------------------------
// Elementwise activations

std::vector<double> relu(std::span<const double> x);
Tensor relu(const Tensor& x);

// Gradient w.r.t. the pre-activation; the subgradient at exactly 0 is 0.
std::vector<double> relu_backward(std::span<const double> d_out, std::span<const double> pre);
Tensor relu_backward(const Tensor& d_out, const Tensor& pre);

// Numerically stable softmax (max subtraction). Output sums to 1.
std::vector<double> softmax(std::span<const double> logits);

// d(coeff * log p[index]) / d logits = coeff * (onehot(index) - p).
std::vector<double> log_softmax_grad(std::span<const double> probs, std::size_t index, double coeff);

struct CategoricalDraw {
    std::size_t index;
    double log_prob;
};

// Samples an index from a probability vector (must sum to 1 within 1e-9).
CategoricalDraw sample_categorical(std::span<const double> probs, RandomStream& rng);

// ---------------------------------------------------------------------------
// Fully connected layer: y = W x + b, W is {out, in}.

class DenseLayer {
public:
    DenseLayer(std::size_t in, std::size_t out);

    void init_uniform(RandomStream& rng, double scale);
    void register_params(ParamStore& store, const std::string& prefix);

    struct Cache {
        std::vector<double> input;
    };

    std::vector<double> forward(std::span<const double> x, Cache* cache = nullptr) const;

    // Accumulates dW, db; returns the gradient w.r.t. the input.
    std::vector<double> backward(std::span<const double> d_out, const Cache& cache);

    std::size_t in_size() const { return in_; }
    std::size_t out_size() const { return out_; }

    Tensor w, b, dw, db;

private:
    std::size_t in_, out_;
};

// ---------------------------------------------------------------------------
// 2-D convolution, valid (no padding), stride 1, no bias.
// Input {H, W, Cin}, kernels {K, K, Cin, Cout}, output {H-K+1, W-K+1, Cout}.

class Conv2dLayer {
public:
    Conv2dLayer(std::size_t kernel, std::size_t in_channels, std::size_t out_channels);

    void init_uniform(RandomStream& rng, double scale);
    void register_params(ParamStore& store, const std::string& prefix);

    struct Cache {
        Tensor input;
    };

    Tensor forward(const Tensor& image, Cache* cache = nullptr) const;

    // Accumulates dkernels; returns the gradient w.r.t. the input image.
    Tensor backward(const Tensor& d_out, const Cache& cache);

    std::size_t kernel_size() const { return kernel_; }
    std::size_t out_channels() const { return out_ch_; }

    Tensor kernels, dkernels;

private:
    std::size_t kernel_, in_ch_, out_ch_;
};

// ---------------------------------------------------------------------------
// LSTM cell with packed gates in order [input, forget, candidate, output].

class LstmCell {
public:
    LstmCell(std::size_t input_size, std::size_t hidden_size);

    void init_uniform(RandomStream& rng, double scale);
    void register_params(ParamStore& store, const std::string& prefix);

    struct State {
        std::vector<double> h, c;
    };

    State zero_state() const;

    struct Cache {
        std::vector<double> x, h_prev, c_prev;
        std::vector<double> gate_i, gate_f, gate_g, gate_o;
        std::vector<double> c, tanh_c;
    };

    State step(std::span<const double> x, const State& prev, Cache* cache = nullptr) const;

    // One step of backprop through time. d_h is the total gradient flowing
    // into h at this step (head gradients plus the carry from the future);
    // d_c is the cell-state carry, updated in place for the previous step.
    // Accumulates parameter gradients; outputs d_x and d_h_prev.
    void backward_step(const Cache& cache, std::span<const double> d_h,
                       std::vector<double>& d_c, std::vector<double>& d_x,
                       std::vector<double>& d_h_prev);

    std::size_t input_size() const { return input_; }
    std::size_t hidden_size() const { return hidden_; }

    Tensor wx, wh, b;     // {4H, In}, {4H, H}, {4H}
    Tensor dwx, dwh, db;

private:
    std::size_t input_, hidden_;
};

}  // namespace roomsrl::nn
