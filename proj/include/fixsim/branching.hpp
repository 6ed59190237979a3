#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fixsim/game.hpp"
#include "fixsim/rng.hpp"

namespace fixsim {

// Interior root q of q = e^{-lambda(1-q)}, the extinction probability of a
// Poisson branching process with mean offspring lambda > 1.
struct ExtinctionSolution {
    double q = 0.0;
    double lambda_q = 0.0;  // lambda * q, always < 1 in the supercritical case
};

// Bisection on [1e-15, 1-1e-15] to tolerance 1e-12. Throws Subcritical for
// lambda <= 1.
ExtinctionSolution solve_q(double lambda);

// P(extinct by generation m | Z_0 = k) = (g^m(0))^k with g(s) = e^{-lambda(1-s)}.
double extinction_cdf_exact(double lambda, int k, int m);

// Constants of the fractional-linear comparison generating functions:
//   s1 = (4 - lambda^2 q^2) / (lambda q)
//   s2 = lambda e^{-lambda} / (lambda q + e^{-lambda q} - 1)
struct FractionalLinearParams {
    double s1 = 0.0;
    double s2 = 0.0;
};
FractionalLinearParams fractional_linear_params(double lambda);

// Extinction-time CDF sandwich:
//   lower = (q s1 (1-(lambda q)^m) / (s1 - (lambda q)^m))^k, upper likewise
// with s2. Both converge to q^k as m grows.
std::pair<double, double> extinction_cdf_bounds(double lambda, int k, int m);

// theta(eta) = lambda x*, where x* is the unique positive root of
// e^x - 1 = eta x. This is the largest theta such that e^x - 1 <= eta x
// holds on [0, theta/lambda].
double theta_eta(double eta, double lambda);

// Upper bound e^{theta(eta) lambda^{-m} (k eta^m lambda^m - J)} on
// P(max_{t<=m} Z_t >= J | Z_0 = k). May exceed 1 when J is small
// (uninformative); returned unclamped.
double max_exceedance_bound(int k, int m, double J, double eta, double lambda);

// Window for P(T <= m | X_0 = k) of the Wright-Fisher chain:
//   upper = upper_fl + e^{theta lam^{-m}(k eta^m lam^m - N)}
//                    + m C0 J^{3/2} / N
//                    + e^{theta lam^{-m}(k eta^m lam^m - J)}
//   lower = lower_fl - m C0 J^{3/2} / N
//                    - e^{theta lam^{-m}(k eta^m lam^m - J)}
// reported raw and clamped to [0,1].
struct TimeWindow {
    double lower = 0.0;
    double upper = 1.0;
    double lower_raw = 0.0;
    double upper_raw = 1.0;
};

TimeWindow fixation_time_window(int k, int m, int N, int J, double eta,
                                double C0, const DominanceCertificate& cert);

// One Poisson branching-process path. sigma is the first t with Z_t = 0 or
// Z_t >= threshold (when a positive threshold was given); the path stops
// there.
struct BpTrajectory {
    long long initial = 0;
    std::vector<long long> states;  // Z_0, Z_1, ...
    std::optional<long long> sigma;
    long long steps = 0;
    bool censored = false;

    bool extinct() const { return sigma.has_value() && states.back() == 0; }
};

// Sums one Poisson(lambda) draw per individual each generation, sampling by
// CDF inversion (one uniform per draw).
BpTrajectory simulate_bp(double lambda, long long initial, long long max_steps,
                         long long stop_threshold, RngStream& rng);

// Poisson(lambda) by CDF inversion; intended for lambda up to ~30.
long long poisson_sample(double lambda, RngStream& rng);

}  // namespace fixsim
