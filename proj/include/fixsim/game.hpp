#pragma once

#include <string>

#include "fixsim/errors.hpp"

namespace fixsim {

// Two-strategy game with payoff matrix
//      A    B
//  A   a    b
//  B   c    d
// and selection strength w in [0,1]. These five numbers parameterize
// everything else in the library.
struct GameSpec {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double w = 0.0;

    // Throws std::invalid_argument unless a,b,c,d > 0 and 0 <= w <= 1.
    void validate() const;
};

// A population of N individuals of which i play strategy A.
struct PopulationPoint {
    int N = 2;
    int i = 0;

    PopulationPoint(int N_, int i_);

    bool interior() const { return i >= 1 && i <= N - 1; }
};

// Expected payoffs of an A-player and a B-player against the other N-1
// individuals:
//   piA = (a(i-1) + b(N-i)) / (N-1)
//   piB = (c i + d(N-i-1)) / (N-1)
struct Payoffs {
    double pi_a;
    double pi_b;
};
Payoffs payoffs(const GameSpec& spec, const PopulationPoint& p);

// Fitnesses f = 1-w+w*piA, g = 1-w+w*piB.
struct Fitness {
    double f;
    double g;
};
Fitness fitness(const GameSpec& spec, const PopulationPoint& p);

// Success probability of strategy A in one reproduction event,
//   xi_N(i) = i f / (i f + (N-i) g),
// with xi_N(0) = 0 and xi_N(N) = 1.
double success_prob(const GameSpec& spec, const PopulationPoint& p);

// Local drift mu_N(i) = N xi_N(i) - i of the Wright-Fisher chain.
// Algebraically equal to i(N-i)(f-g) / (i f + (N-i) g).
double drift(const GameSpec& spec, const PopulationPoint& p);

// The same drift obtained through the heterozygosity route: over the
// labeled fitness profile F (i copies of f, N-i copies of g),
//   drift = (1/2) sum_{j,k} |F(k)-F(j)| / sum_j F(j).
// Also reports the heterozygosity H_N(i) = 2i(N-i)/(N(N-1)).
struct HeterozygosityDrift {
    double drift;
    double heterozygosity;
};
HeterozygosityDrift drift_via_heterozygosity(const GameSpec& spec,
                                             const PopulationPoint& p);

// Which of the four candidate ratios attained an extreme in the
// dominance certificate.
enum class RatioSite {
    AtN0Bottom,   // g/f at (N0, i=1)
    AtN0Top,      // g/f at (N0, i=N0-1)
    LimitBottom,  // N->infinity limit of g/f at i=1,   (1-w+wd)/(1-w+wb)
    LimitTop,     // N->infinity limit of g/f at i=N-1, (1-w+wc)/(1-w+wa)
};
const char* ratio_site_name(RatioSite site);

// Analytic constants of the dominance regime. For every N >= N0 and
// interior i the fitness ratio satisfies alpha <= g/f <= gamma < 1, and
//   rho   = exp(-2(1-gamma))
//   theta = exp(-2(1-alpha)/alpha)
//   lambda = (1-w+wb)/(1-w+wd) > 1.
struct DominanceCertificate {
    int N0;
    double alpha;
    double gamma;
    double rho;
    double theta;
    double lambda;
    RatioSite alpha_site;
    RatioSite gamma_site;
};

// Computes the certificate, or throws DominanceViolated naming the failed
// inequality. Requires w > 0, a > b, c > d (the dominance conditions) and
// additionally a > c, b > d, without which no threshold N0 exists (the
// scan below would not terminate).
// N0 = min{ N >= 2 : a(N-1) > cN-d  and  b(N-1) > d(N-2)+c }, both strict.
DominanceCertificate certify_dominance(const GameSpec& spec);

// g/f at (N, i). Helper shared by the certificate and the Moran closed form.
double fitness_ratio(const GameSpec& spec, const PopulationPoint& p);

}  // namespace fixsim
