#include "env/environment.hpp"

#include <algorithm>
#include <stdexcept>

namespace roomsrl::env {

const char* color_name(Color color) {
    switch (color) {
        case Color::Red: return "red";
        case Color::Green: return "green";
        case Color::Blue: return "blue";
        case Color::Yellow: return "yellow";
    }
    throw std::invalid_argument("unknown color");
}

RoomLayout canonical_layout() {
    return RoomLayout{
        {3, 3, 2, 2},
        {Color::Red, Color::Green, Color::Blue, Color::Yellow},
    };
}

const std::vector<RoomLayout>& enumerate_layouts() {
    static const std::vector<RoomLayout> all = [] {
        std::vector<RoomLayout> layouts;
        for (int h0 = 1; h0 <= 4; ++h0) {
            for (int h1 = 1; h1 <= 4; ++h1) {
                for (int h2 = 1; h2 <= 4; ++h2) {
                    const int h3 = kGridRows - h0 - h1 - h2;
                    if (h3 < 1 || h3 > 4) continue;
                    std::array<Color, 4> colors{Color::Red, Color::Green,
                                                Color::Blue, Color::Yellow};
                    do {
                        layouts.push_back(RoomLayout{{h0, h1, h2, h3}, colors});
                    } while (std::next_permutation(
                        colors.begin(), colors.end(),
                        [](Color a, Color b) { return static_cast<int>(a) < static_cast<int>(b); }));
                }
            }
        }
        return layouts;
    }();
    return all;
}

RoomLayout generate_layout(LayoutMode mode, nn::RandomStream& rng) {
    if (mode == LayoutMode::Fixed) return canonical_layout();
    const auto& all = enumerate_layouts();
    return all[rng.uniform_index(all.size())];
}

int room_of(const RoomLayout& layout, int row) {
    if (row < 0 || row >= kGridRows) {
        throw std::invalid_argument("row outside grid");
    }
    int first = 0;
    for (int room = 0; room < 4; ++room) {
        first += layout.heights[static_cast<std::size_t>(room)];
        if (row < first) return room;
    }
    throw std::invalid_argument("layout heights do not cover the grid");
}

int room_first_row(const RoomLayout& layout, int room) {
    if (room < 0 || room > 3) throw std::invalid_argument("room index outside [0,3]");
    int first = 0;
    for (int i = 0; i < room; ++i) first += layout.heights[static_cast<std::size_t>(i)];
    return first;
}

int room_last_row(const RoomLayout& layout, int room) {
    return room_first_row(layout, room) + layout.heights[static_cast<std::size_t>(room)] - 1;
}

int room_of_color(const RoomLayout& layout, Color color) {
    for (int room = 0; room < 4; ++room) {
        if (layout.colors[static_cast<std::size_t>(room)] == color) return room;
    }
    throw std::invalid_argument("color not present in layout");
}

GridState reset(LayoutMode mode, nn::RandomStream& rng) {
    GridState state;
    state.layout = generate_layout(mode, rng);
    state.agent_row = 0;
    state.agent_col = 0;
    state.target_color = state.layout.colors[3];
    state.steps_taken = 0;
    return state;
}

Observation render(const GridState& state) {
    Observation obs{nn::Tensor({kGridRows, kGridCols, kImageChannels}), {}};
    for (int row = 0; row < kGridRows; ++row) {
        const int channel = static_cast<int>(
            state.layout.colors[static_cast<std::size_t>(room_of(state.layout, row))]);
        for (int col = 0; col < kGridCols; ++col) {
            obs.image.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col),
                         static_cast<std::size_t>(channel)) = 1.0;
        }
    }
    obs.image.at(static_cast<std::size_t>(state.agent_row),
                 static_cast<std::size_t>(state.agent_col),
                 static_cast<std::size_t>(kNumColors)) = 1.0;
    obs.instruction.fill(0.0);
    obs.instruction[static_cast<std::size_t>(state.target_color)] = 1.0;
    return obs;
}

StepOutcome apply_agent_move(GridState& state, int delta_row, int timeout) {
    if (delta_row < -1 || delta_row > 1) {
        throw std::invalid_argument("delta_row must be -1, 0, or +1");
    }
    state.agent_row = std::clamp(state.agent_row + delta_row, 0, kGridRows - 1);
    state.steps_taken += 1;
    const bool in_target =
        state.layout.colors[static_cast<std::size_t>(room_of(state.layout, state.agent_row))] ==
        state.target_color;
    if (in_target) return StepOutcome{1.0, true, true};
    if (state.steps_taken >= timeout) return StepOutcome{-0.01, true, false};
    return StepOutcome{-0.01, false, false};
}

}  // namespace roomsrl::env
