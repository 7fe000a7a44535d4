#pragma once

#include <array>
#include <vector>

#include "nn/rng.hpp"
#include "nn/tensor.hpp"

namespace roomsrl::env {

enum class Color : int { Red = 0, Green = 1, Blue = 2, Yellow = 3 };

inline constexpr int kNumColors = 4;
inline constexpr int kGridRows = 10;
inline constexpr int kGridCols = 5;
inline constexpr int kImageChannels = kNumColors + 1;  // color planes + agent plane
inline constexpr int kDefaultTimeout = 100;

const char* color_name(Color color);

enum class LayoutMode { Fixed, Dynamic };

// Four full-width horizontal rooms stacked top to bottom.
struct RoomLayout {
    std::array<int, 4> heights;   // rows per room, each in [1,4], summing to 10
    std::array<Color, 4> colors;  // permutation of the four colors
};

RoomLayout canonical_layout();

// All valid layouts (44 height compositions x 24 color orders = 1056) in a
// fixed deterministic order.
const std::vector<RoomLayout>& enumerate_layouts();

// Fixed mode returns the canonical layout; dynamic mode samples uniformly
// from enumerate_layouts().
RoomLayout generate_layout(LayoutMode mode, nn::RandomStream& rng);

int room_of(const RoomLayout& layout, int row);
int room_first_row(const RoomLayout& layout, int room);
int room_last_row(const RoomLayout& layout, int room);
int room_of_color(const RoomLayout& layout, Color color);

struct GridState {
    RoomLayout layout;
    int agent_row = 0;
    int agent_col = 0;
    Color target_color = Color::Red;
    int steps_taken = 0;
};

struct Observation {
    nn::Tensor image;                   // {10,5,5}: channels 0-3 room color, 4 agent
    std::array<double, 4> instruction;  // one-hot over colors
};

struct StepOutcome {
    double reward = 0.0;
    bool done = false;
    bool success = false;
};

// Agent starts at (0,0); the target is the bottom room's color.
GridState reset(LayoutMode mode, nn::RandomStream& rng);

Observation render(const GridState& state);

// Moves the agent by delta_row in {-1,0,+1} (clamped to the grid), advances
// the step counter, and scores the step: +1 and success on entering the
// target room, -0.01 otherwise, with a timeout cutoff.
StepOutcome apply_agent_move(GridState& state, int delta_row,
                             int timeout = kDefaultTimeout);

}  // namespace roomsrl::env
