#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixsim/bounds.hpp"
#include "fixsim/branching.hpp"
#include "fixsim/exact.hpp"

using namespace fixsim;

namespace {
const GameSpec kRunning{4.0, 2.0, 3.0, 1.0, 0.3};
}

TEST_CASE("bound formulas match their naive forms") {
    const DominanceCertificate cert = certify_dominance(kRunning);
    const BoundReport wf = wf_fixation_bounds(cert, 10, 3);
    CHECK(wf.source == BoundSource::WrightFisher);
    CHECK(wf.N == 10);
    CHECK(wf.i == 3);
    CHECK(wf.lower == doctest::Approx((1.0 - std::pow(cert.rho, 3)) /
                                      (1.0 - std::pow(cert.rho, 10)))
                          .epsilon(1e-14));
    CHECK(wf.upper == doctest::Approx((1.0 - std::pow(cert.theta, 3)) /
                                      (1.0 - std::pow(cert.theta, 10)))
                          .epsilon(1e-14));

    const BoundReport mo = moran_fixation_bounds(cert, 10, 3);
    CHECK(mo.source == BoundSource::Moran);
    CHECK(mo.lower == doctest::Approx((1.0 - std::pow(cert.gamma, 3)) /
                                      (1.0 - std::pow(cert.gamma, 10)))
                          .epsilon(1e-14));
    CHECK(mo.upper == doctest::Approx((1.0 - std::pow(cert.alpha, 3)) /
                                      (1.0 - std::pow(cert.alpha, 10)))
                          .epsilon(1e-14));
}

TEST_CASE("bounds reject N below the threshold") {
    const DominanceCertificate cert = certify_dominance(kRunning);
    REQUIRE(cert.N0 == 4);
    CHECK_THROWS_AS(wf_fixation_bounds(cert, 3, 1), BelowN0);
    CHECK_THROWS_AS(moran_fixation_bounds(cert, 3, 1), BelowN0);
    CHECK_NOTHROW(wf_fixation_bounds(cert, 4, 1));
}

TEST_CASE("sandwich contains the exact values") {
    const DominanceCertificate cert = certify_dominance(kRunning);
    for (int N = cert.N0; N <= 60; ++N) {
        const FixationVector wf = solve_fixation(ChainKernel::wright_fisher(kRunning, N));
        for (int i = 1; i < N; ++i) {
            const BoundReport rep = wf_fixation_bounds(cert, N, i);
            CHECK(rep.lower <= wf.p[i]);
            CHECK(wf.p[i] <= rep.upper);
            CHECK(rep.lower > 0.0);
            CHECK(rep.upper < 1.0);
        }
        for (int i = 1; i < N; ++i) {
            const BoundReport rep = moran_fixation_bounds(cert, N, i);
            const double exact = moran_closed_form(kRunning, N, i);
            CHECK(rep.lower <= exact);
            CHECK(exact <= rep.upper);
        }
    }
}

TEST_CASE("bounds increase in the initial state") {
    const DominanceCertificate cert = certify_dominance(kRunning);
    const int N = 40;
    BoundReport prev = wf_fixation_bounds(cert, N, 1);
    for (int i = 2; i < N; ++i) {
        const BoundReport cur = wf_fixation_bounds(cert, N, i);
        CHECK(cur.lower > prev.lower);
        CHECK(cur.upper > prev.upper);
        prev = cur;
    }
}

TEST_CASE("infinite population limits") {
    const DominanceCertificate cert = certify_dominance(kRunning);
    const ExtinctionSolution ext = solve_q(cert.lambda);
    for (int i = 1; i <= 8; ++i) {
        CHECK(wf_limit(cert, i) ==
              doctest::Approx(1.0 - std::pow(ext.q, i)).epsilon(1e-12));
        CHECK(moran_limit(cert, i) ==
              doctest::Approx(1.0 - std::pow(cert.lambda, -i)).epsilon(1e-12));
    }
    // Frozen values for the running example.
    CHECK(wf_limit(cert, 1) == doctest::Approx(1.0 - 0.57703004793870731).epsilon(1e-10));
    CHECK(moran_limit(cert, 1) == doctest::Approx(1.0 - 1.0 / 1.3).epsilon(1e-12));

    // For very large N the finite-N bounds collapse onto 1 - base^i.
    for (int i = 1; i <= 5; ++i) {
        const BoundReport rep = wf_fixation_bounds(cert, 2000, i);
        CHECK(rep.lower == doctest::Approx(1.0 - std::pow(cert.rho, i)).epsilon(1e-13));
        CHECK(rep.upper == doctest::Approx(1.0 - std::pow(cert.theta, i)).epsilon(1e-13));
    }
}

TEST_CASE("pd tightness classifier") {
    // All five payoff patterns below satisfy the dilemma ordering
    // b > d > a > c except where noted; s = ad - bc, t = c + b - a - d.

    // s = 6.5 > 0, t = -1.5 < 0.
    PdTightness always = classify_pd_tightness(GameSpec{3.0, 4.0, 1.0, 3.5, 0.5});
    CHECK(always.kind == PdTightness::Kind::AlwaysTight);

    // s = 0.5 > 0, t = 0.5 > 0, threshold 1/(1 + s/t) = 1/2.
    PdTightness iff = classify_pd_tightness(GameSpec{1.5, 4.0, 1.0, 3.0, 0.5});
    CHECK(iff.kind == PdTightness::Kind::TightIffWGeq);
    CHECK(iff.threshold == doctest::Approx(0.5).epsilon(1e-12));

    // s = 0 exactly (ad = bc), t = 1.25 > 0.
    PdTightness only1 = classify_pd_tightness(GameSpec{2.0, 4.5, 1.0, 2.25, 0.5});
    CHECK(only1.kind == PdTightness::Kind::TightOnlyW1);

    // s = -1.8 < 0, t = 1.9 > 0.
    PdTightness never = classify_pd_tightness(GameSpec{1.1, 4.0, 1.0, 2.0, 0.5});
    CHECK(never.kind == PdTightness::Kind::NeverTight);

    // s > 0 with t = 0 lands in the always-tight cell of the partition.
    PdTightness edge = classify_pd_tightness(GameSpec{2.0, 4.0, 1.0, 3.0, 0.5});
    CHECK(edge.kind == PdTightness::Kind::AlwaysTight);

    // Not a prisoner's dilemma: the running example has a > b.
    CHECK_THROWS_AS(classify_pd_tightness(kRunning), NotPD);

    // A jiggle below the relative tolerance still reads as s = 0.
    GameSpec jiggled{2.0, 4.5, 1.0, 2.25 + 1e-15, 0.5};
    CHECK(classify_pd_tightness(jiggled).kind == PdTightness::Kind::TightOnlyW1);
}

TEST_CASE("infeasible cell is never reached") {
    // Random dilemmas: s < 0 and t < 0 cannot co-occur, so the classifier
    // must never return Infeasible.
    std::uint64_t state = 88172645463325252ULL;
    auto rnd = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return double(state >> 11) * 0x1.0p-53;
    };
    int classified = 0;
    while (classified < 5000) {
        const double c = 0.1 + rnd();
        const double a = c + 0.01 + rnd();
        const double d = a + 0.01 + rnd();
        const double b = d + 0.01 + rnd();
        const GameSpec spec{a, b, c, d, 0.5};
        const PdTightness res = classify_pd_tightness(spec);
        CHECK(res.kind != PdTightness::Kind::Infeasible);
        const double s = a * d - b * c;
        const double t = c + b - a - d;
        CHECK_FALSE((s < -1e-9 && t < -1e-9));
        ++classified;
    }
}

TEST_CASE("name helpers") {
    CHECK(std::string(bound_source_name(BoundSource::WrightFisher)) == "wright-fisher");
    CHECK(std::string(bound_source_name(BoundSource::Moran)) == "moran");
    CHECK(std::string(bound_source_name(BoundSource::Limit)) == "limit");
    CHECK(std::string(pd_tightness_name(PdTightness::Kind::AlwaysTight)).size() > 0);
}
