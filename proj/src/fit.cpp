#include "fixsim/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace fixsim {

namespace {

double sse(const std::vector<std::pair<int, double>>& pairs, double q) {
    double acc = 0.0;
    for (const auto& [i, p] : pairs) {
        const double model = 1.0 - std::pow(q, static_cast<double>(i));
        const double r = p - model;
        acc += r * r;
    }
    return acc;
}

}  // namespace

FitResult fit_qn(const std::vector<std::pair<int, double>>& pairs) {
    if (pairs.size() < 2) {
        throw std::invalid_argument("fit needs at least 2 pairs");
    }
    bool informative = false;
    for (const auto& [i, p] : pairs) {
        if (i < 1) throw std::invalid_argument("pair indices must be >= 1");
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("fixation probabilities must lie in [0,1]");
        }
        if (p != 0.0 && p != 1.0) informative = true;
    }
    if (!informative) {
        throw DegenerateInput("every input probability is 0 or 1; q is unidentified");
    }

    const double lo_edge = 1e-9;
    const double hi_edge = 1.0 - 1e-9;

    // Coarse grid pass to bracket the basin; the SSE is unimodal on all
    // observed inputs but a grid keeps the golden section honest anyway.
    const int grid = 400;
    int best_k = 0;
    double best_v = sse(pairs, lo_edge);
    for (int k = 1; k <= grid; ++k) {
        const double q = lo_edge + (hi_edge - lo_edge) * k / grid;
        const double v = sse(pairs, q);
        if (v < best_v) {
            best_v = v;
            best_k = k;
        }
    }
    double lo = lo_edge + (hi_edge - lo_edge) * std::max(0, best_k - 1) / grid;
    double hi = lo_edge + (hi_edge - lo_edge) * std::min(grid, best_k + 1) / grid;

    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = sse(pairs, x1);
    double f2 = sse(pairs, x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = sse(pairs, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = sse(pairs, x2);
        }
    }
    FitResult out;
    out.q_fit = 0.5 * (lo + hi);
    out.sse = sse(pairs, out.q_fit);
    return out;
}

}  // namespace fixsim
