#include "fixsim/game.hpp"

#include <cmath>
#include <sstream>

namespace fixsim {

void GameSpec::validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !(d > 0.0)) {
        std::ostringstream os;
        os << "payoffs must be positive, got a=" << a << " b=" << b
           << " c=" << c << " d=" << d;
        throw std::invalid_argument(os.str());
    }
    if (!(w >= 0.0 && w <= 1.0)) {
        std::ostringstream os;
        os << "selection strength w must lie in [0,1], got " << w;
        throw std::invalid_argument(os.str());
    }
}

PopulationPoint::PopulationPoint(int N_, int i_) : N(N_), i(i_) {
    if (N < 2) {
        throw std::invalid_argument("population size N must be at least 2, got " +
                                    std::to_string(N));
    }
    if (i < 0 || i > N) {
        throw std::invalid_argument("state i=" + std::to_string(i) +
                                    " outside {0,...," + std::to_string(N) + "}");
    }
}

Payoffs payoffs(const GameSpec& spec, const PopulationPoint& p) {
    const double n1 = static_cast<double>(p.N - 1);
    const double i = static_cast<double>(p.i);
    const double ni = static_cast<double>(p.N - p.i);
    return Payoffs{
        (spec.a * (i - 1.0) + spec.b * ni) / n1,
        (spec.c * i + spec.d * (ni - 1.0)) / n1,
    };
}

Fitness fitness(const GameSpec& spec, const PopulationPoint& p) {
    const Payoffs pay = payoffs(spec, p);
    return Fitness{1.0 - spec.w + spec.w * pay.pi_a,
                   1.0 - spec.w + spec.w * pay.pi_b};
}

double success_prob(const GameSpec& spec, const PopulationPoint& p) {
    if (p.i == 0) return 0.0;
    if (p.i == p.N) return 1.0;
    const Fitness fg = fitness(spec, p);
    const double i = static_cast<double>(p.i);
    const double ni = static_cast<double>(p.N - p.i);
    return i * fg.f / (i * fg.f + ni * fg.g);
}

double drift(const GameSpec& spec, const PopulationPoint& p) {
    if (p.i == 0 || p.i == p.N) return 0.0;
    // Ratio form of N xi - i. The f - g factor keeps the neutral case
    // (f = g = 1) at exactly zero, where the N xi - i form leaves division
    // roundoff behind.
    const Fitness fg = fitness(spec, p);
    const double i = static_cast<double>(p.i);
    const double ni = static_cast<double>(p.N - p.i);
    return i * ni * (fg.f - fg.g) / (i * fg.f + ni * fg.g);
}

HeterozygosityDrift drift_via_heterozygosity(const GameSpec& spec,
                                             const PopulationPoint& p) {
    const double N = static_cast<double>(p.N);
    const double i = static_cast<double>(p.i);
    const Fitness fg = fitness(spec, p);
    // The profile holds i entries equal to f and N-i equal to g, so the
    // double sum of |F(k)-F(j)| has 2 i (N-i) nonzero terms, each |f-g|.
    const double pairs = i * (N - i);
    const double total = i * fg.f + (N - i) * fg.g;
    HeterozygosityDrift out;
    out.drift = pairs * std::fabs(fg.f - fg.g) / total;
    out.heterozygosity = 2.0 * pairs / (N * (N - 1.0));
    return out;
}

double fitness_ratio(const GameSpec& spec, const PopulationPoint& p) {
    const Fitness fg = fitness(spec, p);
    return fg.g / fg.f;
}

const char* ratio_site_name(RatioSite site) {
    switch (site) {
        // Comma-free so the names embed in CSV cells untouched.
        case RatioSite::AtN0Bottom: return "at N0 i=1";
        case RatioSite::AtN0Top: return "at N0 i=N0-1";
        case RatioSite::LimitBottom: return "limit N->inf i=1";
        case RatioSite::LimitTop: return "limit N->inf i=N-1";
    }
    return "?";
}

DominanceCertificate certify_dominance(const GameSpec& spec) {
    spec.validate();
    if (!(spec.w > 0.0)) {
        throw DominanceViolated("w > 0 fails: neutral selection has no dominant strategy");
    }
    if (!(spec.a > spec.b)) {
        throw DominanceViolated("a > b fails");
    }
    if (!(spec.c > spec.d)) {
        throw DominanceViolated("c > d fails");
    }
    // The threshold scan needs a > c and b > d: the first inequality below
    // is eventually true iff a > c, the second iff b > d.
    if (!(spec.a > spec.c)) {
        throw DominanceViolated("a > c fails: a(N-1) > cN-d holds for no N");
    }
    if (!(spec.b > spec.d)) {
        throw DominanceViolated("b > d fails: b(N-1) > d(N-2)+c holds for no N");
    }

    // Direct scan. Near-degenerate specs (a-c or b-d tiny) can push N0 very
    // high; refuse beyond a practical cap rather than loop for minutes.
    constexpr int kScanCap = 100000000;
    int N0 = 2;
    while (!(spec.a * (N0 - 1) > spec.c * N0 - spec.d &&
             spec.b * (N0 - 1) > spec.d * (N0 - 2) + spec.c)) {
        if (++N0 > kScanCap) {
            throw DominanceViolated(
                "threshold N0 exceeds 1e8; margins a-c or b-d too small");
        }
    }

    // The ratio g/f is monotone in i at fixed N (Moebius in i) and its two
    // endpoint values are monotone in N, so the extremes over all N >= N0
    // and interior i sit among four candidates: the endpoints at N0 and
    // their N -> infinity limits.
    const double r_bottom_n0 =
        fitness_ratio(spec, PopulationPoint(N0, 1));
    const double r_top_n0 =
        fitness_ratio(spec, PopulationPoint(N0, N0 - 1));
    const double r_bottom_lim =
        (1.0 - spec.w + spec.w * spec.d) / (1.0 - spec.w + spec.w * spec.b);
    const double r_top_lim =
        (1.0 - spec.w + spec.w * spec.c) / (1.0 - spec.w + spec.w * spec.a);

    const double values[4] = {r_bottom_n0, r_top_n0, r_bottom_lim, r_top_lim};
    const RatioSite sites[4] = {RatioSite::AtN0Bottom, RatioSite::AtN0Top,
                                RatioSite::LimitBottom, RatioSite::LimitTop};
    int lo = 0, hi = 0;
    for (int k = 1; k < 4; ++k) {
        if (values[k] < values[lo]) lo = k;
        if (values[k] > values[hi]) hi = k;
    }

    DominanceCertificate cert;
    cert.N0 = N0;
    cert.alpha = values[lo];
    cert.gamma = values[hi];
    cert.alpha_site = sites[lo];
    cert.gamma_site = sites[hi];
    cert.rho = std::exp(-2.0 * (1.0 - cert.gamma));
    cert.theta = std::exp(-2.0 * (1.0 - cert.alpha) / cert.alpha);
    cert.lambda = (1.0 - spec.w + spec.w * spec.b) /
                  (1.0 - spec.w + spec.w * spec.d);
    return cert;
}

}  // namespace fixsim
