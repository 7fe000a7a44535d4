#pragma once

#include <string>
#include <vector>

namespace roomsrl::harness {

struct GradCheckCase {
    std::string name;
    double max_rel_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct GradCheckReport {
    std::vector<GradCheckCase> cases;
    bool all_pass = false;
};

// Finite-difference verification of every layer plus both full policy
// networks driven by short random episodes, repeated over `seeds` seeds.
// Each case reports its worst relative error across seeds.
GradCheckReport run_gradcheck_suite(int seeds = 20, double epsilon = 1e-5,
                                    double tolerance = 1e-4);

}  // namespace roomsrl::harness
