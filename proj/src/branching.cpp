#include "fixsim/branching.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fixsim {

ExtinctionSolution solve_q(double lambda) {
    if (!(lambda > 1.0)) {
        throw Subcritical("mean offspring lambda=" + std::to_string(lambda) +
                          " must exceed 1");
    }
    // q - e^{-lambda(1-q)} is negative at the left end, positive just left
    // of 1 (the fixed point at 1 is approached from above since lambda > 1),
    // and the interior root is unique.
    double lo = 1e-15;
    double hi = 1.0 - 1e-15;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double v = mid - std::exp(-lambda * (1.0 - mid));
        if (v > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    ExtinctionSolution sol;
    sol.q = 0.5 * (lo + hi);
    sol.lambda_q = lambda * sol.q;
    return sol;
}

double extinction_cdf_exact(double lambda, int k, int m) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (m < 0) throw std::invalid_argument("m must be nonnegative");
    double s = 0.0;
    for (int t = 0; t < m; ++t) {
        s = std::exp(-lambda * (1.0 - s));
    }
    return std::pow(s, static_cast<double>(k));
}

FractionalLinearParams fractional_linear_params(double lambda) {
    const ExtinctionSolution sol = solve_q(lambda);
    const double lq = sol.lambda_q;
    FractionalLinearParams out;
    out.s1 = (4.0 - lq * lq) / lq;
    out.s2 = lambda * std::exp(-lambda) / (lq + std::exp(-lq) - 1.0);
    return out;
}

namespace {

double fractional_linear_cdf(double q, double s, double lq, int k, int m) {
    const double x = std::pow(lq, static_cast<double>(m));
    const double one = q * s * (1.0 - x) / (s - x);
    return std::pow(one, static_cast<double>(k));
}

}  // namespace

std::pair<double, double> extinction_cdf_bounds(double lambda, int k, int m) {
    if (k < 1 || m < 1) {
        throw std::invalid_argument("extinction_cdf_bounds needs k, m >= 1");
    }
    const ExtinctionSolution sol = solve_q(lambda);
    const FractionalLinearParams fl = fractional_linear_params(lambda);
    return {fractional_linear_cdf(sol.q, fl.s1, sol.lambda_q, k, m),
            fractional_linear_cdf(sol.q, fl.s2, sol.lambda_q, k, m)};
}

double theta_eta(double eta, double lambda) {
    if (!(eta > 1.0)) {
        throw std::invalid_argument("eta must exceed 1");
    }
    // Unique positive root of e^x - 1 = eta x: the function e^x - 1 - eta x
    // is negative on (0, x*) and positive beyond.
    double hi = 1.0;
    while (std::exp(hi) - 1.0 - eta * hi < 0.0) {
        hi *= 2.0;
        if (hi > 1e9) {
            throw NumericalError("theta_eta bracket expansion failed");
        }
    }
    double lo = 0.0;
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (std::exp(mid) - 1.0 - eta * mid > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return lambda * 0.5 * (lo + hi);
}

double max_exceedance_bound(int k, int m, double J, double eta, double lambda) {
    if (k < 1 || m < 1 || J < 1.0) {
        throw std::invalid_argument("max_exceedance_bound needs k, m, J >= 1");
    }
    const double theta = theta_eta(eta, lambda);
    const double lam_m = std::pow(lambda, static_cast<double>(m));
    double exponent =
        theta * (static_cast<double>(k) * std::pow(eta, static_cast<double>(m)) *
                     lam_m -
                 J) /
        lam_m;
    if (!std::isfinite(exponent)) {
        // Rearranged form for extreme m where lambda^m overflows.
        exponent = theta * (static_cast<double>(k) *
                                std::pow(eta, static_cast<double>(m)) -
                            J * std::pow(lambda, -static_cast<double>(m)));
    }
    return std::exp(exponent);
}

TimeWindow fixation_time_window(int k, int m, int N, int J, double eta,
                                double C0, const DominanceCertificate& cert) {
    if (N < cert.N0) {
        throw BelowN0("N=" + std::to_string(N) +
                      " is below the certified threshold N0=" +
                      std::to_string(cert.N0));
    }
    if (J < 1 || J > N - 1) {
        throw std::invalid_argument("J must be an interior state");
    }
    if (k < 1 || m < 1) {
        throw std::invalid_argument("fixation_time_window needs k, m >= 1");
    }
    if (!(C0 > 0.0)) {
        throw std::invalid_argument("C0 must be positive");
    }
    const auto [fl_lower, fl_upper] = extinction_cdf_bounds(cert.lambda, k, m);
    const double pen_J =
        max_exceedance_bound(k, m, static_cast<double>(J), eta, cert.lambda);
    const double pen_N =
        max_exceedance_bound(k, m, static_cast<double>(N), eta, cert.lambda);
    const double corr = static_cast<double>(m) * C0 *
                        std::pow(static_cast<double>(J), 1.5) /
                        static_cast<double>(N);

    TimeWindow win;
    win.lower_raw = fl_lower - corr - pen_J;
    win.upper_raw = fl_upper + pen_N + corr + pen_J;
    win.lower = std::min(1.0, std::max(0.0, win.lower_raw));
    win.upper = std::min(1.0, std::max(0.0, win.upper_raw));
    return win;
}

long long poisson_sample(double lambda, RngStream& rng) {
    const double u = rng.next_uniform();
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    long long j = 0;
    // Inversion walk; the cap is far beyond any mass reachable by u < 1.
    const long long cap = static_cast<long long>(10.0 * lambda) + 200;
    while (u >= cdf && j < cap) {
        ++j;
        pmf *= lambda / static_cast<double>(j);
        cdf += pmf;
    }
    return j;
}

BpTrajectory simulate_bp(double lambda, long long initial, long long max_steps,
                         long long stop_threshold, RngStream& rng) {
    if (initial < 0) {
        throw std::invalid_argument("initial population must be nonnegative");
    }
    BpTrajectory tr;
    tr.initial = initial;
    tr.states.push_back(initial);
    if (initial == 0 ||
        (stop_threshold > 0 && initial >= stop_threshold)) {
        tr.sigma = 0;
        return tr;
    }
    long long z = initial;
    while (tr.steps < max_steps) {
        long long next = 0;
        for (long long ind = 0; ind < z; ++ind) {
            next += poisson_sample(lambda, rng);
        }
        z = next;
        ++tr.steps;
        tr.states.push_back(z);
        if (z == 0 || (stop_threshold > 0 && z >= stop_threshold)) {
            tr.sigma = tr.steps;
            return tr;
        }
    }
    tr.censored = true;
    return tr;
}

}  // namespace fixsim
