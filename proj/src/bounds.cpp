#include "fixsim/bounds.hpp"

#include <cmath>
#include <string>

#include "fixsim/branching.hpp"

namespace fixsim {

namespace {

// (1 - base^i) / (1 - base^N) via expm1 so that bases close to 1 (rho for
// weak selection) keep full relative precision at large N.
double geometric_ratio(double base, int i, int N) {
    const double lb = std::log(base);
    return std::expm1(i * lb) / std::expm1(N * lb);
}

void require_at_least_n0(const DominanceCertificate& cert, int N) {
    if (N < cert.N0) {
        throw BelowN0("N=" + std::to_string(N) +
                      " is below the certified threshold N0=" +
                      std::to_string(cert.N0));
    }
}

}  // namespace

const char* bound_source_name(BoundSource source) {
    switch (source) {
        case BoundSource::WrightFisher: return "wright-fisher";
        case BoundSource::Moran: return "moran";
        case BoundSource::Limit: return "limit";
    }
    return "?";
}

BoundReport wf_fixation_bounds(const DominanceCertificate& cert, int N, int i) {
    require_at_least_n0(cert, N);
    BoundReport rep;
    rep.N = N;
    rep.i = i;
    rep.source = BoundSource::WrightFisher;
    rep.lower = geometric_ratio(cert.rho, i, N);
    rep.upper = geometric_ratio(cert.theta, i, N);
    return rep;
}

BoundReport moran_fixation_bounds(const DominanceCertificate& cert, int N, int i) {
    require_at_least_n0(cert, N);
    BoundReport rep;
    rep.N = N;
    rep.i = i;
    rep.source = BoundSource::Moran;
    rep.lower = geometric_ratio(cert.gamma, i, N);
    rep.upper = geometric_ratio(cert.alpha, i, N);
    return rep;
}

double wf_limit(const DominanceCertificate& cert, int i) {
    const ExtinctionSolution sol = solve_q(cert.lambda);
    return -std::expm1(i * std::log(sol.q));
}

double moran_limit(const DominanceCertificate& cert, int i) {
    return -std::expm1(-i * std::log(cert.lambda));
}

const char* pd_tightness_name(PdTightness::Kind kind) {
    switch (kind) {
        case PdTightness::Kind::AlwaysTight: return "always-tight";
        case PdTightness::Kind::TightIffWGeq: return "tight-iff-w-geq";
        case PdTightness::Kind::TightOnlyW1: return "tight-only-w-1";
        case PdTightness::Kind::NeverTight: return "never-tight";
        case PdTightness::Kind::Infeasible: return "infeasible";
    }
    return "?";
}

PdTightness classify_pd_tightness(const GameSpec& spec) {
    spec.validate();
    if (!(spec.b > spec.d && spec.d > spec.a && spec.a > spec.c)) {
        throw NotPD("classifier needs the prisoner's dilemma ordering b > d > a > c");
    }
    const double s = spec.a * spec.d - spec.b * spec.c;
    const double t = spec.c + spec.b - spec.a - spec.d;
    // Relative tolerance for the equality branches; payoffs are positive so
    // the natural scales are the products and the payoff total.
    const double s_tol =
        1e-12 * std::max(spec.a * spec.d, spec.b * spec.c);
    const double t_tol = 1e-12 * (spec.a + spec.b + spec.c + spec.d);
    const int s_sign = s > s_tol ? 1 : (s < -s_tol ? -1 : 0);
    const int t_sign = t > t_tol ? 1 : (t < -t_tol ? -1 : 0);

    PdTightness out;
    if (s_sign >= 0 && t_sign <= 0) {
        out.kind = PdTightness::Kind::AlwaysTight;
    } else if (s_sign > 0 && t_sign > 0) {
        out.kind = PdTightness::Kind::TightIffWGeq;
        out.threshold = 1.0 / (1.0 + s / t);
    } else if (s_sign == 0 && t_sign > 0) {
        out.kind = PdTightness::Kind::TightOnlyW1;
    } else if (s_sign < 0 && t_sign >= 0) {
        out.kind = PdTightness::Kind::NeverTight;
    } else {
        // s < 0 and t < 0: proven impossible under the PD ordering; kept as
        // a reachable enum value only so the impossibility is testable.
        out.kind = PdTightness::Kind::Infeasible;
    }
    return out;
}

}  // namespace fixsim
