#pragma once

#include <functional>
#include <string>

#include "nn/param_store.hpp"

namespace roomsrl::nn {

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::string worst_param;
    std::size_t worst_index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
};

// Compares the gradients already accumulated in `store` against central
// finite differences of `loss`. The loss closure must be deterministic in
// the parameter values; it is re-evaluated with each scalar perturbed by
// +/- epsilon. Parameter values are restored exactly afterwards.
GradCheckResult finite_diff_check(ParamStore& store,
                                  const std::function<double()>& loss,
                                  double epsilon = 1e-5);

// Relative error with the spec denominator: |a - b| / max(|a|, |b|, floor).
double rel_error(double a, double b, double floor = 1e-8);

}  // namespace roomsrl::nn
