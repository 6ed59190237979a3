#pragma once

#include <utility>
#include <vector>

#include "fixsim/errors.hpp"

namespace fixsim {

// Least-squares fit of the one-parameter model p_i ~ 1 - q^i.
struct FitResult {
    double q_fit = 0.0;
    double sse = 0.0;
};

// Minimizes sum_i (p_i - (1 - q^i))^2 over q in (1e-9, 1-1e-9) by golden
// section to bracket width 1e-10, after a coarse grid pass locates the
// basin. Throws DegenerateInput when every p_i is exactly 0 or 1.
FitResult fit_qn(const std::vector<std::pair<int, double>>& pairs);

}  // namespace fixsim
