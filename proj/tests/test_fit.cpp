#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "fixsim/exact.hpp"
#include "fixsim/fit.hpp"

using namespace fixsim;

namespace {
const GameSpec kRunning{4.0, 2.0, 3.0, 1.0, 0.3};
}

TEST_CASE("zero-residual model recovers q exactly") {
    std::vector<std::pair<int, double>> pairs;
    for (int i = 1; i <= 10; ++i) {
        pairs.emplace_back(i, 1.0 - std::pow(0.6, i));
    }
    const FitResult fit = fit_qn(pairs);
    CHECK(fit.q_fit == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(fit.sse < 1e-18);
}

TEST_CASE("single repeated pair") {
    std::vector<std::pair<int, double>> pairs{{1, 0.5}, {1, 0.5}};
    const FitResult fit = fit_qn(pairs);
    CHECK(fit.q_fit == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("noise perturbs the estimate only mildly") {
    std::vector<std::pair<int, double>> pairs;
    const double eps[10] = {3e-4, -2e-4, 1e-4, -3e-4, 2e-4,
                            -1e-4, 3e-4, -2e-4, 1e-4, -1e-4};
    for (int i = 1; i <= 10; ++i) {
        pairs.emplace_back(i, 1.0 - std::pow(0.6, i) + eps[i - 1]);
    }
    const FitResult fit = fit_qn(pairs);
    CHECK(std::fabs(fit.q_fit - 0.6) < 1e-3);
    CHECK(fit.sse > 0.0);
    CHECK(fit.sse < 1e-5);
}

TEST_CASE("degenerate and malformed input") {
    CHECK_THROWS_AS(fit_qn({{1, 1.0}, {2, 1.0}, {3, 0.0}}), DegenerateInput);
    CHECK_THROWS_AS(fit_qn({{1, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_qn({{0, 0.5}, {1, 0.4}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_qn({{1, 0.5}, {2, 1.4}}), std::invalid_argument);
}

TEST_CASE("fit of the exact small-population fixation curve") {
    // Fitting 1 - q^i to the exact N=10 fixation probabilities lands near
    // the small-population effective base.
    const FixationVector fv = solve_fixation(ChainKernel::wright_fisher(kRunning, 10));
    std::vector<std::pair<int, double>> pairs;
    for (int i = 1; i <= 10; ++i) pairs.emplace_back(i, fv.p[i]);
    const FitResult fit = fit_qn(pairs);
    CHECK(std::fabs(fit.q_fit - 0.6979) < 0.02);

    // The base shrinks toward the branching value as N grows.
    const FixationVector fv100 =
        solve_fixation(ChainKernel::wright_fisher(kRunning, 100));
    std::vector<std::pair<int, double>> pairs100;
    for (int i = 1; i <= 10; ++i) pairs100.emplace_back(i, fv100.p[i]);
    const FitResult fit100 = fit_qn(pairs100);
    CHECK(std::fabs(fit100.q_fit - 0.5909) < 0.01);
    CHECK(fit100.q_fit < fit.q_fit);
}
