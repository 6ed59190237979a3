#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fixsim/game.hpp"
#include "fixsim/rng.hpp"

namespace fixsim {

enum class KernelKind { WrightFisher, Moran, EmbeddedMoran };

// A finite Markov chain on {0..N} with absorbing boundaries, described row
// by row. Rows are generated on demand; the kernel itself only caches the
// per-state success probabilities and a log-factorial table, so it is cheap
// to construct and immutable afterwards (safe to share across threads).
class ChainKernel {
public:
    static ChainKernel wright_fisher(const GameSpec& spec, int N);
    static ChainKernel moran(const GameSpec& spec, int N);
    static ChainKernel embedded_moran(const GameSpec& spec, int N);

    KernelKind kind() const { return kind_; }
    const GameSpec& spec() const { return spec_; }
    int N() const { return N_; }

    // Success probability xi_N(i), cached.
    double xi(int i) const { return xi_[static_cast<std::size_t>(i)]; }

    // Dense transition row from state i; sums to 1 within 1e-12.
    // Wright-Fisher rows are BIN(N, xi_N(i)) with the pmf computed in
    // log space and exponentiated; Moran rows are tridiagonal with
    //   P(i,i+1) = ((N-i)/N) xi,  P(i,i-1) = (i/N)(1-xi),
    // and the embedded jump chain renormalizes those two entries.
    std::vector<double> row(int i) const;

    // One transition sampled by CDF inversion using a single uniform.
    int sample_step(int i, RngStream& rng) const;

    // log C(N, j) from the cached log-factorial table.
    double log_choose(int j) const;

private:
    ChainKernel(KernelKind kind, const GameSpec& spec, int N);

    KernelKind kind_;
    GameSpec spec_;
    int N_;
    std::vector<double> xi_;      // xi_N(i), i = 0..N
    std::vector<double> log_fact_;  // log(k!), k = 0..N
};

// One realized path. For N > 1000 only every 10th state is recorded to
// keep memory bounded; the absorption state is always recorded exactly and
// `steps` always counts unthinned transitions.
struct Trajectory {
    int initial = 0;
    int thin = 1;
    std::vector<int> states;            // recorded states, starting with initial
    std::optional<int> absorbed_at;     // 0 or N when absorbed
    long long steps = 0;                // transitions actually taken
    bool censored = false;              // hit max_steps before absorbing
};

// Runs the chain from `initial` until absorption or max_steps.
// Identical (kernel, initial, rng state) gives an identical Trajectory.
Trajectory simulate(const ChainKernel& kernel, int initial,
                    long long max_steps, RngStream& rng);

long long default_max_steps(KernelKind kind);

// Monte Carlo fixation estimate. ci95 = point +- 1.96 se with the binomial
// standard error. If any replicas were censored (no absorption within
// max_steps) the estimate conditions on the absorbed ones and `censored`
// says how many were dropped.
struct McEstimate {
    double point = 0.0;
    double std_error = 0.0;
    long long replicas = 0;
    long long censored = 0;
    std::pair<double, double> ci95{0.0, 0.0};
};

McEstimate monte_carlo_fixation(const ChainKernel& kernel, int initial,
                                long long replicas, std::uint64_t seed,
                                RunMode mode = RunMode::Parallel,
                                long long max_steps = 0);

// Empirical CDF of the absorption time T at the given horizons
// (sorted ascending). Entry k estimates P(T <= horizons[k] | X_0 = initial).
struct TimeCdfPoint {
    long long horizon = 0;
    double probability = 0.0;
    double std_error = 0.0;
};

std::vector<TimeCdfPoint> empirical_time_cdf(const ChainKernel& kernel,
                                             int initial, long long replicas,
                                             std::uint64_t seed,
                                             const std::vector<long long>& horizons,
                                             RunMode mode = RunMode::Parallel);

// Checks strict first-order stochastic dominance of row(j) over row(i) for
// all interior i < j: the row CDFs must satisfy CDF_i(k) > CDF_j(k) for
// every k in {0..N-1}. Returns the first violation if any.
struct MonotonicityReport {
    bool monotone = true;
    int i = -1;
    int j = -1;
    int k = -1;
};

MonotonicityReport verify_stochastic_monotonicity(const ChainKernel& kernel);

// Long-format CSV rows "replica,step,state" for a batch of trajectories.
void write_trajectories_csv(const std::vector<Trajectory>& trajectories,
                            const std::string& path,
                            const std::vector<std::string>& metadata);

}  // namespace fixsim
