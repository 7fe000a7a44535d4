#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "nn/adam.hpp"
#include "nn/checkpoint.hpp"
#include "nn/gradcheck.hpp"
#include "nn/layers.hpp"
#include "nn/param_store.hpp"
#include "nn/rng.hpp"
#include "nn/tensor.hpp"
#include "support/oracles.hpp"

using namespace roomsrl;
using nn::RandomStream;
using nn::Tensor;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, RandomStream& rng, double scale = 1.0) {
    Tensor t(std::move(shape));
    for (double& v : t) v = rng.uniform(-scale, scale);
    return t;
}

}  // namespace

TEST_CASE("tensor: shape bookkeeping and from()") {
    Tensor t = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
    CHECK(t.rank() == 2);
    CHECK(t.size() == 6);
    CHECK(t.at(1, 2) == 6.0);
    CHECK(t.all_finite());
    t.at(0, 1) = std::nan("");
    CHECK_FALSE(t.all_finite());
}

TEST_CASE("conv2d: zero input gives zero output") {
    RandomStream rng(1);
    nn::Conv2dLayer conv(3, 5, 8);
    conv.init_uniform(rng, 0.5);
    Tensor input({5, 5, 5});
    const Tensor out = conv.forward(input);
    for (const double v : out) CHECK(v == 0.0);
}

TEST_CASE("conv2d: all-ones 3x3 kernel over all-ones 3x3 input sums to 9") {
    nn::Conv2dLayer conv(3, 1, 1);
    conv.kernels.fill(1.0);
    Tensor input({3, 3, 1});
    input.fill(1.0);
    const Tensor out = conv.forward(input);
    REQUIRE(out.shape() == std::vector<std::size_t>{1, 1, 1});
    CHECK(out[0] == 9.0);
}

TEST_CASE("conv2d: matches nested-loop reference on random input") {
    RandomStream rng(7);
    nn::Conv2dLayer conv(3, 5, 8);
    conv.init_uniform(rng, 0.5);
    const Tensor input = random_tensor({5, 5, 5}, rng);
    const Tensor got = conv.forward(input);
    const Tensor want = testsupport::conv2d_reference(input, conv.kernels);
    REQUIRE(got.shape() == std::vector<std::size_t>{3, 3, 8});
    REQUIRE(got.same_shape(want));
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("relu: forward examples") {
    const std::vector<double> y = nn::relu(std::vector<double>{-1.0, 0.0, 2.0});
    CHECK(y == std::vector<double>{0.0, 0.0, 2.0});
    const std::vector<double> z = nn::relu(std::vector<double>{-5.0, -0.25, -1e9});
    CHECK(z == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("relu: subgradient is 1 for positive, 0 for negative and at zero") {
    const std::vector<double> d =
        nn::relu_backward(std::vector<double>{1.0, 1.0, 1.0}, std::vector<double>{3.0, -3.0, 0.0});
    CHECK(d == std::vector<double>{1.0, 0.0, 0.0});
}

TEST_CASE("softmax: uniform, stability, and analytic cases") {
    const std::vector<double> uniform = nn::softmax(std::vector<double>{0.0, 0.0, 0.0, 0.0});
    for (const double p : uniform) CHECK(p == doctest::Approx(0.25).epsilon(1e-14));

    const std::vector<double> extreme = nn::softmax(std::vector<double>{1000.0, 0.0});
    CHECK(std::isfinite(extreme[0]));
    CHECK(std::isfinite(extreme[1]));
    CHECK(extreme[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(extreme[1] == doctest::Approx(0.0).epsilon(1e-12));

    const std::vector<double> skewed = nn::softmax(std::vector<double>{std::log(1.0), std::log(3.0)});
    CHECK(skewed[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(skewed[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("softmax: sums to 1 within 1e-12 across magnitudes") {
    RandomStream rng(3);
    for (const double scale : {1.0, 1e3, 1e6}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> logits(5);
            for (double& v : logits) v = rng.uniform(-scale, scale);
            const std::vector<double> p = nn::softmax(logits);
            double sum = 0.0;
            for (const double v : p) {
                CHECK(std::isfinite(v));
                sum += v;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("sample_categorical: degenerate distribution") {
    RandomStream rng(0);
    const auto draw = nn::sample_categorical(std::vector<double>{1.0, 0.0, 0.0, 0.0}, rng);
    CHECK(draw.index == 0);
    CHECK(draw.log_prob == 0.0);
}

TEST_CASE("sample_categorical: fair coin frequency over 1e5 draws") {
    RandomStream rng(11);
    const std::vector<double> probs{0.5, 0.5};
    int zeros = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        if (nn::sample_categorical(probs, rng).index == 0) ++zeros;
    }
    const double freq = static_cast<double>(zeros) / n;
    CHECK(freq >= 0.49);
    CHECK(freq <= 0.51);
}

TEST_CASE("sample_categorical: same seed gives same sequence") {
    RandomStream a(99), b(99);
    const std::vector<double> probs{0.2, 0.3, 0.5};
    for (int i = 0; i < 200; ++i) {
        CHECK(nn::sample_categorical(probs, a).index == nn::sample_categorical(probs, b).index);
    }
}

TEST_CASE("log_softmax_grad: coeff * (onehot - p)") {
    const std::vector<double> p{0.25, 0.75};
    const std::vector<double> d = nn::log_softmax_grad(p, 0, 2.0);
    CHECK(d[0] == doctest::Approx(2.0 * (1.0 - 0.25)).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx(2.0 * (0.0 - 0.75)).epsilon(1e-14));
}

TEST_CASE("dense: explicit forward") {
    nn::DenseLayer dense(2, 2);
    dense.w.at(0, 0) = 1.0;
    dense.w.at(0, 1) = 2.0;
    dense.w.at(1, 0) = 3.0;
    dense.w.at(1, 1) = 4.0;
    dense.b[0] = 0.5;
    dense.b[1] = -0.5;
    const std::vector<double> y = dense.forward(std::vector<double>{1.0, 1.0});
    CHECK(y == std::vector<double>{3.5, 6.5});
}

TEST_CASE("lstm: zero weights keep the hidden state at zero") {
    nn::LstmCell lstm(4, 6);
    RandomStream rng(5);
    nn::LstmCell::State state = lstm.zero_state();
    for (int t = 0; t < 5; ++t) {
        std::vector<double> x(4);
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        state = lstm.step(x, state);
        for (const double h : state.h) CHECK(h == 0.0);
        for (const double c : state.c) CHECK(c == 0.0);
    }
}

TEST_CASE("lstm: deterministic and h bounded in (-1, 1)") {
    RandomStream rng(8);
    nn::LstmCell lstm(3, 5);
    lstm.init_uniform(rng, 0.5);
    std::vector<double> x{0.3, -0.7, 1.1};
    const auto s1 = lstm.step(x, lstm.zero_state());
    const auto s2 = lstm.step(x, lstm.zero_state());
    REQUIRE(s1.h.size() == 5);
    REQUIRE(s1.c.size() == 5);
    for (std::size_t i = 0; i < s1.h.size(); ++i) {
        CHECK(s1.h[i] == s2.h[i]);
        CHECK(s1.c[i] == s2.c[i]);
        CHECK(s1.h[i] > -1.0);
        CHECK(s1.h[i] < 1.0);
    }
}

TEST_CASE("lstm: 3-step BPTT matches finite differences") {
    for (const std::uint64_t seed : {21u, 22u, 23u}) {
        RandomStream rng(seed);
        nn::LstmCell lstm(5, 7);
        lstm.init_uniform(rng, 0.5);
        nn::ParamStore store;
        lstm.register_params(store, "lstm");

        std::vector<std::vector<double>> inputs;
        for (int t = 0; t < 3; ++t) {
            std::vector<double> x(5);
            for (double& v : x) v = rng.uniform(-1.0, 1.0);
            inputs.push_back(std::move(x));
        }

        // Loss: sum over steps of 0.5 |h_t|^2.
        const auto run_loss = [&]() {
            nn::LstmCell::State state = lstm.zero_state();
            double loss = 0.0;
            for (const auto& x : inputs) {
                state = lstm.step(x, state);
                for (const double h : state.h) loss += 0.5 * h * h;
            }
            return loss;
        };

        std::vector<nn::LstmCell::Cache> caches(3);
        std::vector<nn::LstmCell::State> states;
        nn::LstmCell::State state = lstm.zero_state();
        for (int t = 0; t < 3; ++t) {
            state = lstm.step(inputs[static_cast<std::size_t>(t)], state,
                              &caches[static_cast<std::size_t>(t)]);
            states.push_back(state);
        }
        std::vector<double> d_c(7, 0.0), d_h_carry(7, 0.0);
        for (int t = 2; t >= 0; --t) {
            std::vector<double> d_h = states[static_cast<std::size_t>(t)].h;  // dL/dh_t = h_t
            for (std::size_t i = 0; i < d_h.size(); ++i) d_h[i] += d_h_carry[i];
            std::vector<double> d_x;
            lstm.backward_step(caches[static_cast<std::size_t>(t)], d_h, d_c, d_x, d_h_carry);
        }

        const auto result = nn::finite_diff_check(store, run_loss);
        INFO("seed ", seed, " worst ", result.worst_param, "[", result.worst_index, "] analytic ",
             result.analytic, " numeric ", result.numeric);
        CHECK(result.max_rel_error < 1e-4);
    }
}

TEST_CASE("adam: zero gradient leaves parameters unchanged and increments t") {
    nn::Tensor theta = Tensor::from({3}, {0.5, -1.5, 2.0});
    nn::Tensor grad({3});
    nn::ParamStore store;
    store.add("theta", &theta, &grad);
    nn::AdamOptimizer adam(store, nn::AdamConfig{});
    CHECK(adam.steps_taken() == 0);
    adam.step(store);
    adam.step(store);
    CHECK(adam.steps_taken() == 2);
    CHECK(theta[0] == 0.5);
    CHECK(theta[1] == -1.5);
    CHECK(theta[2] == 2.0);
}

TEST_CASE("adam: first step moves theta by about -lr for g=0.5") {
    nn::Tensor theta({1});
    nn::Tensor grad({1});
    grad[0] = 0.5;
    nn::ParamStore store;
    store.add("theta", &theta, &grad);
    nn::AdamOptimizer adam(store, nn::AdamConfig{});  // lr 1e-5, default betas
    adam.step(store);
    CHECK(theta[0] == doctest::Approx(-1e-5).epsilon(1e-6));
    CHECK(grad[0] == 0.0);  // consumed
}

TEST_CASE("adam: two constant-gradient steps match the recurrence exactly") {
    nn::Tensor theta({1});
    nn::Tensor grad({1});
    nn::ParamStore store;
    store.add("theta", &theta, &grad);
    nn::AdamConfig cfg;
    cfg.learning_rate = 1e-3;
    nn::AdamOptimizer adam(store, cfg);

    const double g = 0.7;
    double m = 0.0, v = 0.0, expected = 0.0, prev_delta = 0.0, last_delta = 0.0;
    for (int t = 1; t <= 2; ++t) {
        grad[0] = g;
        adam.step(store);
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
        const double m_hat = m / (1.0 - std::pow(cfg.beta1, t));
        const double v_hat = v / (1.0 - std::pow(cfg.beta2, t));
        const double delta = -cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
        prev_delta = last_delta;
        last_delta = delta;
        expected += delta;
        CHECK(theta[0] == expected);
    }
    CHECK(std::abs(std::abs(last_delta) - std::abs(prev_delta)) <= 0.01 * std::abs(prev_delta));
}

TEST_CASE("adam: non-finite gradient raises NumericError naming the parameter") {
    nn::Tensor theta({2});
    nn::Tensor grad({2});
    grad[1] = std::nan("");
    nn::ParamStore store;
    store.add("head.w", &theta, &grad);
    nn::AdamOptimizer adam(store, nn::AdamConfig{});
    CHECK_THROWS_WITH_AS(adam.step(store), "non-finite gradient in parameter 'head.w'",
                         NumericError);
}

TEST_CASE("adam: config validation") {
    nn::Tensor theta({1}), grad({1});
    nn::ParamStore store;
    store.add("theta", &theta, &grad);
    nn::AdamConfig bad;
    bad.beta1 = 1.0;
    CHECK_THROWS_AS(nn::AdamOptimizer(store, bad), std::invalid_argument);
    bad = nn::AdamConfig{};
    bad.learning_rate = -1.0;
    CHECK_THROWS_AS(nn::AdamOptimizer(store, bad), std::invalid_argument);
    bad = nn::AdamConfig{};
    bad.learning_rate = 0.0;  // allowed: the no-op optimizer
    CHECK_NOTHROW(nn::AdamOptimizer(store, bad));
}

TEST_CASE("finite_diff_check: exact for a linear model with quadratic loss") {
    RandomStream rng(13);
    nn::DenseLayer dense(4, 3);
    dense.init_uniform(rng, 1.0);
    nn::ParamStore store;
    dense.register_params(store, "dense");
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);

    const auto loss = [&]() {
        const std::vector<double> y = dense.forward(x);
        double acc = 0.0;
        for (const double v : y) acc += 0.5 * v * v;
        return acc;
    };

    nn::DenseLayer::Cache cache;
    const std::vector<double> y = dense.forward(x, &cache);
    dense.backward(y, cache);  // dL/dy = y
    const auto result = nn::finite_diff_check(store, loss);
    CHECK(result.max_rel_error < 1e-8);
}

TEST_CASE("finite_diff_check: detects a corrupted backward pass") {
    RandomStream rng(17);
    nn::DenseLayer dense(4, 3);
    dense.init_uniform(rng, 1.0);
    nn::ParamStore store;
    dense.register_params(store, "dense");
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);

    const auto loss = [&]() {
        const std::vector<double> y = dense.forward(x);
        double acc = 0.0;
        for (const double v : y) acc += 0.5 * v * v;
        return acc;
    };

    nn::DenseLayer::Cache cache;
    const std::vector<double> y = dense.forward(x, &cache);
    dense.backward(y, cache);
    dense.dw.at(1, 2) += 0.5;  // corrupt one entry
    const auto result = nn::finite_diff_check(store, loss);
    CHECK(result.max_rel_error > 1e-2);
    CHECK(result.worst_param == "dense.w");
}

TEST_CASE("rel_error: floor keeps tiny denominators sane") {
    CHECK(nn::rel_error(1.0, 1.0) == 0.0);
    CHECK(nn::rel_error(0.0, 1e-9) == doctest::Approx(1e-9 / 1e-8));
    CHECK(nn::rel_error(2.0, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("checkpoint: round-trip is lossless") {
    RandomStream rng(29);
    nn::DenseLayer dense(6, 4);
    dense.init_uniform(rng, 0.7);
    nn::ParamStore store;
    dense.register_params(store, "dense");
    const Tensor w_before = dense.w;
    const Tensor b_before = dense.b;

    const std::string path = "checkpoint_roundtrip.bin";
    nn::save_params(store, path);
    dense.w.fill(0.0);
    dense.b.fill(0.0);
    nn::load_params(store, path);
    for (std::size_t i = 0; i < w_before.size(); ++i) CHECK(dense.w[i] == w_before[i]);
    for (std::size_t i = 0; i < b_before.size(); ++i) CHECK(dense.b[i] == b_before[i]);
    std::remove(path.c_str());
}

TEST_CASE("checkpoint: mismatched stores are rejected") {
    RandomStream rng(31);
    nn::DenseLayer dense(3, 3);
    dense.init_uniform(rng, 0.5);
    nn::ParamStore store;
    dense.register_params(store, "dense");
    const std::string path = "checkpoint_mismatch.bin";
    nn::save_params(store, path);

    nn::DenseLayer other(3, 4);  // different shape
    nn::ParamStore other_store;
    other.register_params(other_store, "dense");
    CHECK_THROWS_AS(nn::load_params(other_store, path), IoError);

    nn::DenseLayer renamed(3, 3);
    nn::ParamStore renamed_store;
    renamed.register_params(renamed_store, "elsewhere");
    CHECK_THROWS_AS(nn::load_params(renamed_store, path), IoError);
    std::remove(path.c_str());
}

TEST_CASE("rng: split streams depend only on the original seed") {
    RandomStream a(1234);
    RandomStream b(1234);
    a.next_u64();  // advancing the parent must not change child streams
    RandomStream child_a = a.split(42);
    RandomStream child_b = b.split(42);
    for (int i = 0; i < 10; ++i) CHECK(child_a.next_u64() == child_b.next_u64());
    RandomStream other = b.split(43);
    bool all_equal = true;
    RandomStream child_c = a.split(42);
    for (int i = 0; i < 10; ++i) {
        if (child_c.next_u64() != other.next_u64()) all_equal = false;
    }
    CHECK_FALSE(all_equal);
}

TEST_CASE("param_store: bookkeeping") {
    nn::Tensor w({2, 2}), dw({2, 2});
    nn::Tensor b({2}), db({2});
    nn::ParamStore store;
    store.add("w", &w, &dw);
    store.add("b", &b, &db);
    CHECK(store.parameter_count() == 6);
    CHECK(store.find("w") != nullptr);
    CHECK(store.find("missing") == nullptr);
    dw.fill(3.0);
    db.fill(4.0);
    CHECK(store.grad_l2_norm() == doctest::Approx(std::sqrt(4 * 9.0 + 2 * 16.0)));
    store.scale_grads(0.5);
    CHECK(dw[0] == 1.5);
    store.zero_grads();
    CHECK(dw[0] == 0.0);
    CHECK(store.first_non_finite_grad().empty());
    db[1] = std::numeric_limits<double>::infinity();
    CHECK(store.first_non_finite_grad() == "b");
}
