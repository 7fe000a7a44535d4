#pragma once

#include <vector>

#include "env/environment.hpp"

namespace roomsrl::env {

inline constexpr int kWindowRows = 5;
inline constexpr int kMaxWindowTop = kGridRows - kWindowRows;

// Full-width 5x5 crop identified by its top row.
struct AttentionWindow {
    int top_row = 0;  // in [0, kMaxWindowTop]
};

enum class AttentionAction : int { Up = 0, Down = 1, Noop = 2 };

inline constexpr int kNumAttentionActions = 3;

const char* attention_action_name(AttentionAction action);

// Up moves the window one row toward row 0, Down one row away; the result
// is clamped to [0, kMaxWindowTop].
AttentionWindow apply_attention_action(AttentionWindow window, AttentionAction action);

// Rows [top_row, top_row+4] of the image, all columns and channels.
nn::Tensor crop(const Observation& obs, AttentionWindow window);

// Room indices with at least one row inside the window; always a contiguous
// ascending run.
std::vector<int> visible_rooms(const RoomLayout& layout, AttentionWindow window);

bool agent_in_window(const GridState& state, AttentionWindow window);

}  // namespace roomsrl::env
