#pragma once

#include "fixsim/game.hpp"

namespace fixsim {

enum class BoundSource { WrightFisher, Moran, Limit };
const char* bound_source_name(BoundSource source);

struct BoundReport {
    int N = 0;          // 0 for limit reports
    int i = 0;
    double lower = 0.0;
    double upper = 1.0;
    BoundSource source = BoundSource::WrightFisher;
};

// Exponential sandwich for the Wright-Fisher fixation probability:
//   (1 - rho^i) / (1 - rho^N)  <=  p_N(i)  <=  (1 - theta^i) / (1 - theta^N).
// Throws BelowN0 when N < cert.N0.
BoundReport wf_fixation_bounds(const DominanceCertificate& cert, int N, int i);

// Same sandwich for the Moran chain with bases gamma (lower) and alpha
// (upper).
BoundReport moran_fixation_bounds(const DominanceCertificate& cert, int N, int i);

// Infinite-population limits: 1 - q^i for Wright-Fisher, where q is the
// interior root of q = e^{-lambda(1-q)}, and 1 - lambda^{-i} for Moran.
double wf_limit(const DominanceCertificate& cert, int i);
double moran_limit(const DominanceCertificate& cert, int i);

// Classifier for when the exponential bound base matches the limit constant
// (gamma^{-1} = lambda) in a prisoner's dilemma b > d > a > c. The five
// scenarios partition on s = ad - bc and t = c + b - a - d:
//   s >= 0, t <= 0  ->  AlwaysTight        (any w in (0,1])
//   s >  0, t >  0  ->  TightIffWGeq       (threshold (1 + s/t)^{-1})
//   s  = 0, t >  0  ->  TightOnlyW1
//   s <  0, t >= 0  ->  NeverTight
//   s <  0, t <  0  ->  Infeasible         (provably cannot occur)
// Equalities are decided with relative tolerance 1e-12; payoffs whose s or
// t is within that tolerance of zero are classified as the equality case.
struct PdTightness {
    enum class Kind { AlwaysTight, TightIffWGeq, TightOnlyW1, NeverTight, Infeasible };
    Kind kind;
    double threshold = 0.0;  // meaningful for TightIffWGeq only
};
const char* pd_tightness_name(PdTightness::Kind kind);

PdTightness classify_pd_tightness(const GameSpec& spec);

}  // namespace fixsim
