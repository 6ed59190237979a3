#pragma once

#include <vector>

#include "fixsim/chains.hpp"
#include "fixsim/game.hpp"

namespace fixsim {

// Absorption probabilities at N: p[0] = 0, p[N] = 1, and p[i] solves the
// first-step system for interior i.
struct FixationVector {
    int N = 0;
    std::vector<double> p;  // indexed 0..N
};

inline constexpr int kSolverCapDefault = 2000;

// Solves (I - Q) p = r over the interior states, where Q is the
// interior-to-interior block of the kernel and r[i] = P(i -> N), by dense
// LU with partial pivoting. Verifies the residual |(I-Q)p - r|_inf <= 1e-10
// and throws SingularSystem otherwise. Throws CapExceeded for N > cap.
FixationVector solve_fixation(const ChainKernel& kernel,
                              int cap = kSolverCapDefault);

// Closed-form Moran fixation probability
//   p(i) = (1 + sum_{j=1}^{i-1} prod_{k=1}^{j} g_k/f_k)
//        / (1 + sum_{j=1}^{N-1} prod_{k=1}^{j} g_k/f_k)
// with the products accumulated in log space. O(N); usable far beyond the
// dense-solver cap (up to N ~ 1e6).
double moran_closed_form(const GameSpec& spec, int N, int i);

enum class MartingaleDirection { Sub, Super };

// One-step martingale check: for every interior i, verifies
//   E(base^{X'} | X = i)  <=  base^i   (Sub)
//   E(base^{X'} | X = i)  >=  base^i   (Super)
// For the Wright-Fisher kernel the left side has the closed form
// (xi base + 1 - xi)^N; for the Moran kernels it is the three-term sum.
// Violations are measured relative to base^i; max_violation <= 0 means the
// inequality held everywhere.
struct MartingaleReport {
    double max_violation = 0.0;  // signed, relative; positive = violated
    int argmax_i = -1;
    bool ok(double slack = 1e-12) const { return max_violation <= slack; }
};

MartingaleReport check_one_step_martingale(const ChainKernel& kernel,
                                           double base,
                                           MartingaleDirection direction);

enum class GameParam { A, B, C, D, W };
const char* game_param_name(GameParam param);

// Central finite difference of p_N(i) with respect to one parameter,
// step h = 1e-5 max(1, |param|) unless overridden. The perturbed specs
// must stay inside the domain w in (0,1), a > c > 0, b > d > 0 where the
// derivative signs are guaranteed; otherwise DomainExit is thrown.
double parameter_sensitivity(const GameSpec& spec, int N, int i,
                             GameParam param, double h = 0.0);

}  // namespace fixsim
