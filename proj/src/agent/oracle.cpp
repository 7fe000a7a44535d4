#include "agent/oracle.hpp"

#include <stdexcept>

namespace roomsrl::agent {

const char* gating_mode_name(GatingMode mode) {
    switch (mode) {
        case GatingMode::Unconstrained: return "unconstrained";
        case GatingMode::PartialDecomposition: return "partial";
        case GatingMode::Constrained: return "constrained";
    }
    throw std::invalid_argument("unknown gating mode");
}

bool gate_open(GatingMode mode, const env::GridState& state,
               env::AttentionWindow window, env::Color subgoal) {
    if (mode == GatingMode::Unconstrained) return true;
    const int room = env::room_of_color(state.layout, subgoal);
    const int lo = window.top_row;
    const int hi = window.top_row + env::kWindowRows - 1;
    const bool subgoal_visible = env::room_first_row(state.layout, room) <= hi &&
                                 env::room_last_row(state.layout, room) >= lo;
    if (mode == GatingMode::PartialDecomposition) return subgoal_visible;
    return subgoal_visible && env::agent_in_window(state, window);
}

int optimal_delta(const env::GridState& state, env::Color subgoal) {
    const int room = env::room_of_color(state.layout, subgoal);
    const int first = env::room_first_row(state.layout, room);
    const int last = env::room_last_row(state.layout, room);
    if (state.agent_row < first) return 1;
    if (state.agent_row > last) return -1;
    return 0;
}

int act(GatingMode mode, const env::GridState& state,
        env::AttentionWindow window, env::Color subgoal) {
    if (!gate_open(mode, state, window, subgoal)) return 0;
    return optimal_delta(state, subgoal);
}

}  // namespace roomsrl::agent
