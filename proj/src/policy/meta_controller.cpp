#include "policy/meta_controller.hpp"

#include <algorithm>
#include <stdexcept>

namespace roomsrl::policy {

namespace {

constexpr std::size_t conv_out_size(std::size_t rows, std::size_t cols, std::size_t kernel,
                                    std::size_t filters) {
    return (rows - kernel + 1) * (cols - kernel + 1) * filters;
}

std::vector<double> concat_with_instruction(const nn::Tensor& features,
                                            std::span<const double> instruction) {
    std::vector<double> joined;
    joined.reserve(features.size() + instruction.size());
    joined.insert(joined.end(), features.begin(), features.end());
    joined.insert(joined.end(), instruction.begin(), instruction.end());
    return joined;
}

}  // namespace

MetaAction select_action(std::span<const double> p_g, std::span<const double> p_a,
                         nn::RandomStream& rng) {
    const nn::CategoricalDraw g = nn::sample_categorical(p_g, rng);
    const nn::CategoricalDraw a = nn::sample_categorical(p_a, rng);
    return MetaAction{static_cast<int>(g.index),
                      static_cast<env::AttentionAction>(a.index),
                      g.log_prob + a.log_prob};
}

// ---------------------------------------------------------------------------
// AttentionController

AttentionController::AttentionController(nn::RandomStream init_rng, double init_scale)
    : conv_(kKernel, env::kImageChannels, kConvFilters),
      fc_(conv_out_size(env::kWindowRows, env::kGridCols, kKernel, kConvFilters) +
              env::kNumColors,
          kHiddenSize),
      lstm_(kHiddenSize, kHiddenSize),
      head_g_(kHiddenSize, env::kNumColors),
      head_a_(kHiddenSize, env::kNumAttentionActions),
      hidden_(lstm_.zero_state()) {
    conv_.init_uniform(init_rng, init_scale);
    fc_.init_uniform(init_rng, init_scale);
    lstm_.init_uniform(init_rng, init_scale);
    head_g_.init_uniform(init_rng, init_scale);
    head_a_.init_uniform(init_rng, init_scale);
    conv_.register_params(store_, "conv");
    fc_.register_params(store_, "fc");
    lstm_.register_params(store_, "lstm");
    head_g_.register_params(store_, "head_g");
    head_a_.register_params(store_, "head_a");
}

void AttentionController::begin_episode() {
    tape_.clear();
    hidden_ = lstm_.zero_state();
}

HeadDistributions AttentionController::run(const nn::Tensor& crop,
                                           std::span<const double> instruction,
                                           nn::LstmCell::State& state,
                                           StepTape& tape) const {
    nn::Tensor conv_pre = conv_.forward(crop, &tape.conv_cache);
    const nn::Tensor conv_act = nn::relu(conv_pre);
    const std::vector<double> joined = concat_with_instruction(conv_act, instruction);
    std::vector<double> fc_pre = fc_.forward(joined, &tape.fc_cache);
    const std::vector<double> fc_act = nn::relu(fc_pre);
    nn::LstmCell::State next = lstm_.step(fc_act, state, &tape.lstm_cache);
    const std::vector<double> logits_g = head_g_.forward(next.h, &tape.head_g_cache);
    const std::vector<double> logits_a = head_a_.forward(next.h, &tape.head_a_cache);
    tape.conv_pre = std::move(conv_pre);
    tape.fc_pre = std::move(fc_pre);
    HeadDistributions out{nn::softmax(logits_g), nn::softmax(logits_a)};
    tape.p_g = out.subgoal;
    tape.p_a = out.attention;
    state = std::move(next);
    return out;
}

HeadDistributions AttentionController::forward(const nn::Tensor& crop,
                                               std::span<const double> instruction,
                                               nn::LstmCell::State& state) const {
    StepTape scratch;
    return run(crop, instruction, state, scratch);
}

MetaAction AttentionController::step(const env::Observation& obs,
                                     env::AttentionWindow window,
                                     nn::RandomStream& rng) {
    const nn::Tensor cropped = env::crop(obs, window);
    tape_.emplace_back();
    StepTape& tape = tape_.back();
    const HeadDistributions dists = run(cropped, obs.instruction, hidden_, tape);
    MetaAction action = select_action(dists.subgoal, dists.attention, rng);
    tape.idx_g = static_cast<std::size_t>(action.subgoal);
    tape.idx_a = static_cast<std::size_t>(action.attention);
    return action;
}

void AttentionController::backward(const std::vector<double>& coeffs) {
    if (coeffs.size() != tape_.size()) {
        throw std::invalid_argument("coefficient count does not match episode length");
    }
    std::vector<double> d_h_carry(kHiddenSize, 0.0);
    std::vector<double> d_c_carry(kHiddenSize, 0.0);
    for (std::size_t t = tape_.size(); t-- > 0;) {
        StepTape& tape = tape_[t];
        const std::vector<double> d_logits_g =
            nn::log_softmax_grad(tape.p_g, tape.idx_g, -coeffs[t]);
        const std::vector<double> d_h_g = head_g_.backward(d_logits_g, tape.head_g_cache);
        const std::vector<double> d_logits_a =
            nn::log_softmax_grad(tape.p_a, tape.idx_a, -coeffs[t]);
        const std::vector<double> d_h_a = head_a_.backward(d_logits_a, tape.head_a_cache);
        std::vector<double> d_h(kHiddenSize);
        for (std::size_t i = 0; i < kHiddenSize; ++i) {
            d_h[i] = d_h_g[i] + d_h_a[i] + d_h_carry[i];
        }
        std::vector<double> d_x, d_h_prev;
        lstm_.backward_step(tape.lstm_cache, d_h, d_c_carry, d_x, d_h_prev);
        d_h_carry = std::move(d_h_prev);
        const std::vector<double> d_fc_pre = nn::relu_backward(d_x, tape.fc_pre);
        const std::vector<double> d_joined = fc_.backward(d_fc_pre, tape.fc_cache);
        nn::Tensor d_conv_act(tape.conv_pre.shape());
        std::copy(d_joined.begin(), d_joined.begin() + static_cast<std::ptrdiff_t>(d_conv_act.size()),
                  d_conv_act.begin());
        const nn::Tensor d_conv_pre = nn::relu_backward(d_conv_act, tape.conv_pre);
        conv_.backward(d_conv_pre, tape.conv_cache);
    }
}

// ---------------------------------------------------------------------------
// FeedforwardController

FeedforwardController::FeedforwardController(nn::RandomStream init_rng, double init_scale)
    : conv_(kKernel, env::kImageChannels, kConvFilters),
      fc_(conv_out_size(env::kGridRows, env::kGridCols, kKernel, kConvFilters) +
              env::kNumColors,
          kHiddenSize),
      head_g_(kHiddenSize, env::kNumColors) {
    conv_.init_uniform(init_rng, init_scale);
    fc_.init_uniform(init_rng, init_scale);
    head_g_.init_uniform(init_rng, init_scale);
    conv_.register_params(store_, "conv");
    fc_.register_params(store_, "fc");
    head_g_.register_params(store_, "head_g");
}

void FeedforwardController::begin_episode() { tape_.clear(); }

std::vector<double> FeedforwardController::run(const nn::Tensor& image,
                                               std::span<const double> instruction,
                                               StepTape& tape) const {
    nn::Tensor conv_pre = conv_.forward(image, &tape.conv_cache);
    const nn::Tensor conv_act = nn::relu(conv_pre);
    const std::vector<double> joined = concat_with_instruction(conv_act, instruction);
    std::vector<double> fc_pre = fc_.forward(joined, &tape.fc_cache);
    const std::vector<double> fc_act = nn::relu(fc_pre);
    const std::vector<double> logits_g = head_g_.forward(fc_act, &tape.head_g_cache);
    tape.conv_pre = std::move(conv_pre);
    tape.fc_pre = std::move(fc_pre);
    tape.p_g = nn::softmax(logits_g);
    return tape.p_g;
}

HeadDistributions FeedforwardController::forward(const nn::Tensor& image,
                                                 std::span<const double> instruction) const {
    StepTape scratch;
    return HeadDistributions{run(image, instruction, scratch), {}};
}

MetaAction FeedforwardController::step(const env::Observation& obs,
                                       env::AttentionWindow /*window*/,
                                       nn::RandomStream& rng) {
    tape_.emplace_back();
    StepTape& tape = tape_.back();
    const std::vector<double> p_g = run(obs.image, obs.instruction, tape);
    const nn::CategoricalDraw g = nn::sample_categorical(p_g, rng);
    tape.idx_g = g.index;
    return MetaAction{static_cast<int>(g.index), env::AttentionAction::Noop, g.log_prob};
}

void FeedforwardController::backward(const std::vector<double>& coeffs) {
    if (coeffs.size() != tape_.size()) {
        throw std::invalid_argument("coefficient count does not match episode length");
    }
    for (std::size_t t = tape_.size(); t-- > 0;) {
        StepTape& tape = tape_[t];
        const std::vector<double> d_logits_g =
            nn::log_softmax_grad(tape.p_g, tape.idx_g, -coeffs[t]);
        const std::vector<double> d_fc_act = head_g_.backward(d_logits_g, tape.head_g_cache);
        const std::vector<double> d_fc_pre = nn::relu_backward(d_fc_act, tape.fc_pre);
        const std::vector<double> d_joined = fc_.backward(d_fc_pre, tape.fc_cache);
        nn::Tensor d_conv_act(tape.conv_pre.shape());
        std::copy(d_joined.begin(), d_joined.begin() + static_cast<std::ptrdiff_t>(d_conv_act.size()),
                  d_conv_act.begin());
        const nn::Tensor d_conv_pre = nn::relu_backward(d_conv_act, tape.conv_pre);
        conv_.backward(d_conv_pre, tape.conv_cache);
    }
}

std::unique_ptr<Controller> make_controller(bool use_attention, nn::RandomStream init_rng,
                                            double init_scale) {
    if (use_attention) {
        return std::make_unique<AttentionController>(init_rng, init_scale);
    }
    return std::make_unique<FeedforwardController>(init_rng, init_scale);
}

}  // namespace roomsrl::policy
