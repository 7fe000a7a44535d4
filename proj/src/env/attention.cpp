#include "env/attention.hpp"

#include <algorithm>
#include <stdexcept>

namespace roomsrl::env {

const char* attention_action_name(AttentionAction action) {
    switch (action) {
        case AttentionAction::Up: return "up";
        case AttentionAction::Down: return "down";
        case AttentionAction::Noop: return "noop";
    }
    throw std::invalid_argument("unknown attention action");
}

AttentionWindow apply_attention_action(AttentionWindow window, AttentionAction action) {
    int top = window.top_row;
    switch (action) {
        case AttentionAction::Up: top -= 1; break;
        case AttentionAction::Down: top += 1; break;
        case AttentionAction::Noop: break;
    }
    return AttentionWindow{std::clamp(top, 0, kMaxWindowTop)};
}

nn::Tensor crop(const Observation& obs, AttentionWindow window) {
    if (window.top_row < 0 || window.top_row > kMaxWindowTop) {
        throw std::invalid_argument("attention window outside grid");
    }
    nn::Tensor out({kWindowRows, kGridCols, kImageChannels});
    for (std::size_t r = 0; r < kWindowRows; ++r) {
        for (std::size_t c = 0; c < kGridCols; ++c) {
            for (std::size_t ch = 0; ch < kImageChannels; ++ch) {
                out.at(r, c, ch) =
                    obs.image.at(static_cast<std::size_t>(window.top_row) + r, c, ch);
            }
        }
    }
    return out;
}

std::vector<int> visible_rooms(const RoomLayout& layout, AttentionWindow window) {
    const int lo = window.top_row;
    const int hi = window.top_row + kWindowRows - 1;
    std::vector<int> rooms;
    for (int room = 0; room < 4; ++room) {
        if (room_first_row(layout, room) <= hi && room_last_row(layout, room) >= lo) {
            rooms.push_back(room);
        }
    }
    return rooms;
}

bool agent_in_window(const GridState& state, AttentionWindow window) {
    return state.agent_row >= window.top_row &&
           state.agent_row <= window.top_row + kWindowRows - 1;
}

}  // namespace roomsrl::env
