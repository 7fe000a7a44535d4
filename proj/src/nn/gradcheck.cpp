#include "nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace roomsrl::nn {

double rel_error(double a, double b, double floor) {
    const double denom = std::max({std::fabs(a), std::fabs(b), floor});
    return std::fabs(a - b) / denom;
}

GradCheckResult finite_diff_check(ParamStore& store,
                                  const std::function<double()>& loss,
                                  double epsilon) {
    GradCheckResult result;
    for (const auto& entry : store.entries()) {
        Tensor& value = *entry.value;
        const Tensor& grad = *entry.grad;
        for (std::size_t j = 0; j < value.size(); ++j) {
            const double saved = value[j];
            value[j] = saved + epsilon;
            const double up = loss();
            value[j] = saved - epsilon;
            const double down = loss();
            value[j] = saved;
            const double numeric = (up - down) / (2.0 * epsilon);
            const double err = rel_error(grad[j], numeric);
            if (err > result.max_rel_error) {
                result.max_rel_error = err;
                result.worst_param = entry.name;
                result.worst_index = j;
                result.analytic = grad[j];
                result.numeric = numeric;
            }
        }
    }
    return result;
}

}  // namespace roomsrl::nn
