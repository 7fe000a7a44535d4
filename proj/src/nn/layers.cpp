#include "nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roomsrl::nn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

// ---------------------------------------------------------------------------
// Activations

std::vector<double> relu(std::span<const double> x) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
    return y;
}

Tensor relu(const Tensor& x) {
    Tensor y(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
    return y;
}

std::vector<double> relu_backward(std::span<const double> d_out, std::span<const double> pre) {
    std::vector<double> dx(d_out.size());
    for (std::size_t i = 0; i < d_out.size(); ++i) dx[i] = pre[i] > 0.0 ? d_out[i] : 0.0;
    return dx;
}

Tensor relu_backward(const Tensor& d_out, const Tensor& pre) {
    Tensor dx(d_out.shape());
    for (std::size_t i = 0; i < d_out.size(); ++i) dx[i] = pre[i] > 0.0 ? d_out[i] : 0.0;
    return dx;
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) {
        throw std::invalid_argument("softmax: empty logit vector");
    }
    const double m = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - m);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

std::vector<double> log_softmax_grad(std::span<const double> probs, std::size_t index,
                                     double coeff) {
    std::vector<double> d(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        d[i] = coeff * ((i == index ? 1.0 : 0.0) - probs[i]);
    }
    return d;
}

CategoricalDraw sample_categorical(std::span<const double> probs, RandomStream& rng) {
    if (probs.empty()) {
        throw std::invalid_argument("sample_categorical: empty distribution");
    }
    double sum = 0.0;
    for (double p : probs) sum += p;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("sample_categorical: probabilities do not sum to 1");
    }
    const double u = rng.next_double();
    double cdf = 0.0;
    std::size_t idx = probs.size() - 1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cdf += probs[i];
        if (u < cdf) {
            idx = i;
            break;
        }
    }
    return {idx, std::log(probs[idx])};
}

// ---------------------------------------------------------------------------
// DenseLayer

DenseLayer::DenseLayer(std::size_t in, std::size_t out)
    : w({out, in}), b({out}), dw({out, in}), db({out}), in_(in), out_(out) {}

void DenseLayer::init_uniform(RandomStream& rng, double scale) {
    for (double& v : w) v = rng.uniform(-scale, scale);
    for (double& v : b) v = rng.uniform(-scale, scale);
}

void DenseLayer::register_params(ParamStore& store, const std::string& prefix) {
    store.add(prefix + ".w", &w, &dw);
    store.add(prefix + ".b", &b, &db);
}

std::vector<double> DenseLayer::forward(std::span<const double> x, Cache* cache) const {
    if (x.size() != in_) {
        throw std::invalid_argument("DenseLayer::forward: input size mismatch");
    }
    std::vector<double> y(out_);
    for (std::size_t o = 0; o < out_; ++o) {
        double acc = b[o];
        const double* row = w.data() + o * in_;
        for (std::size_t i = 0; i < in_; ++i) acc += row[i] * x[i];
        y[o] = acc;
    }
    if (cache != nullptr) cache->input.assign(x.begin(), x.end());
    return y;
}

std::vector<double> DenseLayer::backward(std::span<const double> d_out, const Cache& cache) {
    if (d_out.size() != out_ || cache.input.size() != in_) {
        throw std::invalid_argument("DenseLayer::backward: size mismatch");
    }
    std::vector<double> dx(in_, 0.0);
    for (std::size_t o = 0; o < out_; ++o) {
        const double g = d_out[o];
        db[o] += g;
        double* drow = dw.data() + o * in_;
        const double* row = w.data() + o * in_;
        for (std::size_t i = 0; i < in_; ++i) {
            drow[i] += g * cache.input[i];
            dx[i] += row[i] * g;
        }
    }
    return dx;
}

// ---------------------------------------------------------------------------
// Conv2dLayer

Conv2dLayer::Conv2dLayer(std::size_t kernel, std::size_t in_channels, std::size_t out_channels)
    : kernels({kernel, kernel, in_channels, out_channels}),
      dkernels({kernel, kernel, in_channels, out_channels}),
      kernel_(kernel),
      in_ch_(in_channels),
      out_ch_(out_channels) {}

void Conv2dLayer::init_uniform(RandomStream& rng, double scale) {
    for (double& v : kernels) v = rng.uniform(-scale, scale);
}

void Conv2dLayer::register_params(ParamStore& store, const std::string& prefix) {
    store.add(prefix + ".kernels", &kernels, &dkernels);
}

Tensor Conv2dLayer::forward(const Tensor& image, Cache* cache) const {
    if (image.rank() != 3 || image.extent(2) != in_ch_ || image.extent(0) < kernel_ ||
        image.extent(1) < kernel_) {
        throw std::invalid_argument("Conv2dLayer::forward: input shape mismatch");
    }
    const std::size_t oh = image.extent(0) - kernel_ + 1;
    const std::size_t ow = image.extent(1) - kernel_ + 1;
    Tensor out({oh, ow, out_ch_});
    for (std::size_t r = 0; r < oh; ++r) {
        for (std::size_t c = 0; c < ow; ++c) {
            for (std::size_t kr = 0; kr < kernel_; ++kr) {
                for (std::size_t kc = 0; kc < kernel_; ++kc) {
                    for (std::size_t ci = 0; ci < in_ch_; ++ci) {
                        const double x = image.at(r + kr, c + kc, ci);
                        for (std::size_t co = 0; co < out_ch_; ++co) {
                            out.at(r, c, co) += x * kernels.at(kr, kc, ci, co);
                        }
                    }
                }
            }
        }
    }
    if (cache != nullptr) cache->input = image;
    return out;
}

Tensor Conv2dLayer::backward(const Tensor& d_out, const Cache& cache) {
    const Tensor& in = cache.input;
    const std::size_t oh = d_out.extent(0);
    const std::size_t ow = d_out.extent(1);
    if (d_out.rank() != 3 || d_out.extent(2) != out_ch_ || in.rank() != 3 ||
        oh != in.extent(0) - kernel_ + 1 || ow != in.extent(1) - kernel_ + 1) {
        throw std::invalid_argument("Conv2dLayer::backward: shape mismatch");
    }
    Tensor d_in(in.shape());
    for (std::size_t r = 0; r < oh; ++r) {
        for (std::size_t c = 0; c < ow; ++c) {
            for (std::size_t kr = 0; kr < kernel_; ++kr) {
                for (std::size_t kc = 0; kc < kernel_; ++kc) {
                    for (std::size_t ci = 0; ci < in_ch_; ++ci) {
                        const double x = in.at(r + kr, c + kc, ci);
                        double acc = 0.0;
                        for (std::size_t co = 0; co < out_ch_; ++co) {
                            const double g = d_out.at(r, c, co);
                            dkernels.at(kr, kc, ci, co) += g * x;
                            acc += g * kernels.at(kr, kc, ci, co);
                        }
                        d_in.at(r + kr, c + kc, ci) += acc;
                    }
                }
            }
        }
    }
    return d_in;
}

// ---------------------------------------------------------------------------
// LstmCell

LstmCell::LstmCell(std::size_t input_size, std::size_t hidden_size)
    : wx({4 * hidden_size, input_size}),
      wh({4 * hidden_size, hidden_size}),
      b({4 * hidden_size}),
      dwx({4 * hidden_size, input_size}),
      dwh({4 * hidden_size, hidden_size}),
      db({4 * hidden_size}),
      input_(input_size),
      hidden_(hidden_size) {}

void LstmCell::init_uniform(RandomStream& rng, double scale) {
    for (double& v : wx) v = rng.uniform(-scale, scale);
    for (double& v : wh) v = rng.uniform(-scale, scale);
    for (double& v : b) v = rng.uniform(-scale, scale);
}

void LstmCell::register_params(ParamStore& store, const std::string& prefix) {
    store.add(prefix + ".wx", &wx, &dwx);
    store.add(prefix + ".wh", &wh, &dwh);
    store.add(prefix + ".b", &b, &db);
}

LstmCell::State LstmCell::zero_state() const {
    return {std::vector<double>(hidden_, 0.0), std::vector<double>(hidden_, 0.0)};
}

LstmCell::State LstmCell::step(std::span<const double> x, const State& prev,
                               Cache* cache) const {
    if (x.size() != input_ || prev.h.size() != hidden_ || prev.c.size() != hidden_) {
        throw std::invalid_argument("LstmCell::step: dimension mismatch");
    }
    // z = Wx x + Wh h_prev + b, packed rows [i, f, g, o].
    std::vector<double> z(4 * hidden_);
    for (std::size_t r = 0; r < 4 * hidden_; ++r) {
        double acc = b[r];
        const double* xrow = wx.data() + r * input_;
        for (std::size_t i = 0; i < input_; ++i) acc += xrow[i] * x[i];
        const double* hrow = wh.data() + r * hidden_;
        for (std::size_t i = 0; i < hidden_; ++i) acc += hrow[i] * prev.h[i];
        z[r] = acc;
    }
    State next{std::vector<double>(hidden_), std::vector<double>(hidden_)};
    std::vector<double> gi(hidden_), gf(hidden_), gg(hidden_), go(hidden_), tc(hidden_);
    for (std::size_t u = 0; u < hidden_; ++u) {
        gi[u] = sigmoid(z[u]);
        gf[u] = sigmoid(z[hidden_ + u]);
        gg[u] = std::tanh(z[2 * hidden_ + u]);
        go[u] = sigmoid(z[3 * hidden_ + u]);
        next.c[u] = gf[u] * prev.c[u] + gi[u] * gg[u];
        tc[u] = std::tanh(next.c[u]);
        next.h[u] = go[u] * tc[u];
    }
    if (cache != nullptr) {
        cache->x.assign(x.begin(), x.end());
        cache->h_prev = prev.h;
        cache->c_prev = prev.c;
        cache->gate_i = std::move(gi);
        cache->gate_f = std::move(gf);
        cache->gate_g = std::move(gg);
        cache->gate_o = std::move(go);
        cache->c = next.c;
        cache->tanh_c = std::move(tc);
    }
    return next;
}

void LstmCell::backward_step(const Cache& cache, std::span<const double> d_h,
                             std::vector<double>& d_c, std::vector<double>& d_x,
                             std::vector<double>& d_h_prev) {
    std::vector<double> dz(4 * hidden_);
    for (std::size_t u = 0; u < hidden_; ++u) {
        const double i = cache.gate_i[u];
        const double f = cache.gate_f[u];
        const double g = cache.gate_g[u];
        const double o = cache.gate_o[u];
        const double tc = cache.tanh_c[u];

        const double dho = d_h[u];
        const double d_o = dho * tc;
        double dc = d_c[u] + dho * o * (1.0 - tc * tc);

        const double d_i = dc * g;
        const double d_g = dc * i;
        const double d_f = dc * cache.c_prev[u];
        d_c[u] = dc * f;  // carry to the previous step

        dz[u] = d_i * i * (1.0 - i);
        dz[hidden_ + u] = d_f * f * (1.0 - f);
        dz[2 * hidden_ + u] = d_g * (1.0 - g * g);
        dz[3 * hidden_ + u] = d_o * o * (1.0 - o);
    }

    d_x.assign(input_, 0.0);
    d_h_prev.assign(hidden_, 0.0);
    for (std::size_t r = 0; r < 4 * hidden_; ++r) {
        const double gz = dz[r];
        db[r] += gz;
        double* dxrow = dwx.data() + r * input_;
        const double* xrow = wx.data() + r * input_;
        for (std::size_t i = 0; i < input_; ++i) {
            dxrow[i] += gz * cache.x[i];
            d_x[i] += xrow[i] * gz;
        }
        double* dhrow = dwh.data() + r * hidden_;
        const double* hrow = wh.data() + r * hidden_;
        for (std::size_t i = 0; i < hidden_; ++i) {
            dhrow[i] += gz * cache.h_prev[i];
            d_h_prev[i] += hrow[i] * gz;
        }
    }
}

}  // namespace roomsrl::nn
