#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "env/attention.hpp"
#include "env/environment.hpp"
#include "nn/gradcheck.hpp"
#include "nn/rng.hpp"
#include "policy/meta_controller.hpp"
#include "train/reinforce.hpp"

using namespace roomsrl;
using env::AttentionAction;
using nn::RandomStream;

namespace {

void zero_params(policy::Controller& controller) {
    for (const auto& entry : controller.params().entries()) entry.value->fill(0.0);
}

env::Observation fixed_observation() {
    RandomStream rng(0);
    const env::GridState state = env::reset(env::LayoutMode::Fixed, rng);
    return env::render(state);
}

}  // namespace

TEST_CASE("select_action: degenerate heads") {
    RandomStream rng(0);
    const std::vector<double> p_g{1.0, 0.0, 0.0, 0.0};
    const std::vector<double> p_a{0.0, 1.0, 0.0};
    const policy::MetaAction action = policy::select_action(p_g, p_a, rng);
    CHECK(action.subgoal == 0);
    CHECK(action.attention == AttentionAction::Down);
    CHECK(action.joint_log_prob == 0.0);
}

TEST_CASE("select_action: joint log-prob is the sum of the head log-probs") {
    RandomStream rng(17);
    const std::vector<double> p_g{0.1, 0.2, 0.3, 0.4};
    const std::vector<double> p_a{0.5, 0.25, 0.25};
    for (int i = 0; i < 100; ++i) {
        const policy::MetaAction action = policy::select_action(p_g, p_a, rng);
        const double want = std::log(p_g[static_cast<std::size_t>(action.subgoal)]) +
                            std::log(p_a[static_cast<std::size_t>(action.attention)]);
        CHECK(action.joint_log_prob == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("select_action: seeded sampling reproducible") {
    const std::vector<double> p_g{0.1, 0.2, 0.3, 0.4};
    const std::vector<double> p_a{0.5, 0.25, 0.25};
    RandomStream a(5), b(5);
    for (int i = 0; i < 50; ++i) {
        const policy::MetaAction x = policy::select_action(p_g, p_a, a);
        const policy::MetaAction y = policy::select_action(p_g, p_a, b);
        CHECK(x.subgoal == y.subgoal);
        CHECK(x.attention == y.attention);
        CHECK(x.joint_log_prob == y.joint_log_prob);
    }
}

TEST_CASE("attention controller: zero parameters give uniform heads") {
    policy::AttentionController controller(RandomStream(1));
    zero_params(controller);
    const env::Observation obs = fixed_observation();
    nn::LstmCell::State state = controller.zero_state();
    const policy::HeadDistributions heads =
        controller.forward(env::crop(obs, {0}), obs.instruction, state);
    REQUIRE(heads.subgoal.size() == 4);
    REQUIRE(heads.attention.size() == 3);
    for (const double p : heads.subgoal) CHECK(p == doctest::Approx(0.25).epsilon(1e-14));
    for (const double p : heads.attention) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("feedforward controller: zero parameters give a uniform subgoal head") {
    policy::FeedforwardController controller(RandomStream(1));
    zero_params(controller);
    const env::Observation obs = fixed_observation();
    const policy::HeadDistributions heads = controller.forward(obs.image, obs.instruction);
    REQUIRE(heads.subgoal.size() == 4);
    CHECK(heads.attention.empty());
    for (const double p : heads.subgoal) CHECK(p == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("controllers: fixed inputs and params give deterministic outputs") {
    const env::Observation obs = fixed_observation();

    policy::AttentionController attn_a(RandomStream(3)), attn_b(RandomStream(3));
    nn::LstmCell::State sa = attn_a.zero_state(), sb = attn_b.zero_state();
    for (int t = 0; t < 3; ++t) {
        const auto ha = attn_a.forward(env::crop(obs, {0}), obs.instruction, sa);
        const auto hb = attn_b.forward(env::crop(obs, {0}), obs.instruction, sb);
        CHECK(ha.subgoal == hb.subgoal);
        CHECK(ha.attention == hb.attention);
    }

    policy::FeedforwardController ff_a(RandomStream(3)), ff_b(RandomStream(3));
    CHECK(ff_a.forward(obs.image, obs.instruction).subgoal ==
          ff_b.forward(obs.image, obs.instruction).subgoal);
}

TEST_CASE("attention controller: heads are sampled independently") {
    // Changing the attention head's weights must not move the subgoal
    // distribution: the heads share everything up to the LSTM output only.
    policy::AttentionController a(RandomStream(11)), b(RandomStream(11));
    (*b.params().find("head_a.w")->value)[0] += 0.25;  // tilt one attention logit
    const env::Observation obs = fixed_observation();
    nn::LstmCell::State sa = a.zero_state(), sb = b.zero_state();
    const auto ha = a.forward(env::crop(obs, {1}), obs.instruction, sa);
    const auto hb = b.forward(env::crop(obs, {1}), obs.instruction, sb);
    CHECK(ha.subgoal == hb.subgoal);  // bitwise
    bool attention_changed = false;
    for (std::size_t i = 0; i < ha.attention.size(); ++i) {
        if (ha.attention[i] != hb.attention[i]) attention_changed = true;
    }
    CHECK(attention_changed);
}

TEST_CASE("attention controller: the LSTM state carries history") {
    policy::AttentionController controller(RandomStream(19));
    const env::Observation obs = fixed_observation();

    nn::LstmCell::State fresh = controller.zero_state();
    const auto direct = controller.forward(env::crop(obs, {2}), obs.instruction, fresh);

    nn::LstmCell::State warmed = controller.zero_state();
    controller.forward(env::crop(obs, {0}), obs.instruction, warmed);
    const auto after_history = controller.forward(env::crop(obs, {2}), obs.instruction, warmed);

    bool differs = false;
    for (std::size_t i = 0; i < direct.subgoal.size(); ++i) {
        if (direct.subgoal[i] != after_history.subgoal[i]) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("controllers: episode tape bookkeeping") {
    policy::AttentionController controller(RandomStream(23));
    RandomStream rng(1);
    const env::Observation obs = fixed_observation();
    controller.begin_episode();
    CHECK(controller.episode_steps() == 0);
    controller.step(obs, {0}, rng);
    controller.step(obs, {1}, rng);
    CHECK(controller.episode_steps() == 2);
    controller.begin_episode();
    CHECK(controller.episode_steps() == 0);
    CHECK(controller.uses_attention());

    policy::FeedforwardController ff(RandomStream(23));
    CHECK_FALSE(ff.uses_attention());
    ff.begin_episode();
    const policy::MetaAction action = ff.step(obs, {0}, rng);
    CHECK(action.attention == AttentionAction::Noop);
    CHECK(ff.episode_steps() == 1);
}

TEST_CASE("feedforward controller: episode gradient matches finite differences") {
    policy::FeedforwardController controller(RandomStream(29));
    RandomStream rng(7);
    const env::Observation obs = fixed_observation();

    controller.begin_episode();
    std::vector<std::size_t> indices;
    for (int t = 0; t < 3; ++t) {
        const policy::MetaAction action = controller.step(obs, {0}, rng);
        indices.push_back(static_cast<std::size_t>(action.subgoal));
    }
    const std::vector<double> coeffs{1.0, -0.5, 0.25};
    controller.backward(coeffs);

    const auto loss = [&]() {
        double acc = 0.0;
        for (std::size_t t = 0; t < indices.size(); ++t) {
            const auto heads = controller.forward(obs.image, obs.instruction);
            acc -= coeffs[t] * std::log(heads.subgoal[indices[t]]);
        }
        return acc;
    };
    const auto result = nn::finite_diff_check(controller.params(), loss);
    INFO("worst ", result.worst_param, "[", result.worst_index, "] analytic ", result.analytic,
         " numeric ", result.numeric);
    CHECK(result.max_rel_error < 1e-4);
}

TEST_CASE("attention controller: episode gradient matches finite differences") {
    policy::AttentionController controller(RandomStream(31));
    RandomStream rng(9);
    const env::Observation obs = fixed_observation();

    controller.begin_episode();
    std::vector<std::size_t> idx_g, idx_a;
    std::vector<env::AttentionWindow> windows;
    env::AttentionWindow window{0};
    for (int t = 0; t < 3; ++t) {
        windows.push_back(window);
        const policy::MetaAction action = controller.step(obs, window, rng);
        idx_g.push_back(static_cast<std::size_t>(action.subgoal));
        idx_a.push_back(static_cast<std::size_t>(action.attention));
        window = env::apply_attention_action(window, action.attention);
    }
    // Small coefficients keep every gradient entry clear of the finite
    // difference noise floor; see gradcheck_suite for the numbers.
    const std::vector<double> coeffs{0.003, -0.002, 0.001};
    controller.backward(coeffs);

    const auto loss = [&]() {
        double acc = 0.0;
        nn::LstmCell::State state = controller.zero_state();
        for (std::size_t t = 0; t < idx_g.size(); ++t) {
            const auto heads =
                controller.forward(env::crop(obs, windows[t]), obs.instruction, state);
            acc -= coeffs[t] *
                   (std::log(heads.subgoal[idx_g[t]]) + std::log(heads.attention[idx_a[t]]));
        }
        return acc;
    };
    const auto result = nn::finite_diff_check(controller.params(), loss);
    INFO("worst ", result.worst_param, "[", result.worst_index, "] analytic ", result.analytic,
         " numeric ", result.numeric);
    CHECK(result.max_rel_error < 1e-4);
}

TEST_CASE("controllers: a batch of random episodes touches every parameter tensor") {
    // Catches disconnected graphs. Granularity is the tensor: individual
    // entries can be structurally zero (the agent never leaves column 0,
    // so agent-plane kernel columns past the first see only zeros).
    for (const bool use_attention : {true, false}) {
        const auto controller = policy::make_controller(use_attention, RandomStream(37));
        RandomStream rng(38);
        for (int episode = 0; episode < 8; ++episode) {
            auto episode_rng = rng.split(static_cast<std::uint64_t>(episode));
            const auto result =
                train::rollout_episode(*controller, env::LayoutMode::Dynamic,
                                       agent::GatingMode::Unconstrained, 100, episode_rng);
            train::accumulate_policy_gradient(*controller, result.trajectory, 0.5);
        }
        for (const auto& entry : controller->params().entries()) {
            bool any_nonzero = false;
            for (const double g : *entry.grad) {
                if (g != 0.0) any_nonzero = true;
            }
            INFO("tensor ", entry.name, " attention=", use_attention);
            CHECK(any_nonzero);
        }
    }
}

TEST_CASE("make_controller: picks the architecture by attention flag") {
    const auto attn = policy::make_controller(true, RandomStream(2));
    const auto ff = policy::make_controller(false, RandomStream(2));
    CHECK(attn->uses_attention());
    CHECK_FALSE(ff->uses_attention());
    CHECK(attn->params().parameter_count() > ff->params().parameter_count());
}
