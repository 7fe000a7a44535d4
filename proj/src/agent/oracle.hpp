#pragma once

#include "env/attention.hpp"
#include "env/environment.hpp"

namespace roomsrl::agent {

enum class GatingMode { Unconstrained, PartialDecomposition, Constrained };

const char* gating_mode_name(GatingMode mode);

// Unconstrained: always open. PartialDecomposition: open iff the subgoal
// room has a row inside the window. Constrained: additionally requires the
// agent inside the window.
bool gate_open(GatingMode mode, const env::GridState& state,
               env::AttentionWindow window, env::Color subgoal);

// 0 inside the subgoal room, otherwise one row toward its nearest row.
int optimal_delta(const env::GridState& state, env::Color subgoal);

// gate_open ? optimal_delta : hold still.
int act(GatingMode mode, const env::GridState& state,
        env::AttentionWindow window, env::Color subgoal);

}  // namespace roomsrl::agent
