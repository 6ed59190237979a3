#include "fixsim/chains.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fixsim/montecarlo.hpp"

namespace fixsim {

ChainKernel::ChainKernel(KernelKind kind, const GameSpec& spec, int N)
    : kind_(kind), spec_(spec), N_(N) {
    spec.validate();
    if (N < 2) {
        throw std::invalid_argument("population size N must be at least 2");
    }
    xi_.resize(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) {
        xi_[static_cast<std::size_t>(i)] = success_prob(spec, PopulationPoint(N, i));
    }
    if (kind == KernelKind::WrightFisher) {
        log_fact_.resize(static_cast<std::size_t>(N) + 1);
        log_fact_[0] = 0.0;
        for (int k = 1; k <= N; ++k) {
            log_fact_[static_cast<std::size_t>(k)] =
                log_fact_[static_cast<std::size_t>(k - 1)] + std::log(static_cast<double>(k));
        }
    }
}

ChainKernel ChainKernel::wright_fisher(const GameSpec& spec, int N) {
    return ChainKernel(KernelKind::WrightFisher, spec, N);
}

ChainKernel ChainKernel::moran(const GameSpec& spec, int N) {
    return ChainKernel(KernelKind::Moran, spec, N);
}

ChainKernel ChainKernel::embedded_moran(const GameSpec& spec, int N) {
    return ChainKernel(KernelKind::EmbeddedMoran, spec, N);
}

double ChainKernel::log_choose(int j) const {
    return log_fact_[static_cast<std::size_t>(N_)] -
           log_fact_[static_cast<std::size_t>(j)] -
           log_fact_[static_cast<std::size_t>(N_ - j)];
}

std::vector<double> ChainKernel::row(int i) const {
    const std::size_t n = static_cast<std::size_t>(N_) + 1;
    std::vector<double> out(n, 0.0);
    if (i == 0 || i == N_) {
        out[static_cast<std::size_t>(i)] = 1.0;
        return out;
    }
    const double x = xi(i);
    switch (kind_) {
        case KernelKind::WrightFisher: {
            const double lx = std::log(x);
            const double l1x = std::log1p(-x);
            for (int j = 0; j <= N_; ++j) {
                out[static_cast<std::size_t>(j)] =
                    std::exp(log_choose(j) + j * lx + (N_ - j) * l1x);
            }
            return out;
        }
        case KernelKind::Moran: {
            const double up = (static_cast<double>(N_ - i) / N_) * x;
            const double down = (static_cast<double>(i) / N_) * (1.0 - x);
            out[static_cast<std::size_t>(i + 1)] = up;
            out[static_cast<std::size_t>(i - 1)] = down;
            out[static_cast<std::size_t>(i)] = 1.0 - up - down;
            return out;
        }
        case KernelKind::EmbeddedMoran: {
            // Same one-step law conditioned on leaving i.
            const double u = static_cast<double>(N_ - i) * x;
            const double v = static_cast<double>(i) * (1.0 - x);
            out[static_cast<std::size_t>(i + 1)] = u / (u + v);
            out[static_cast<std::size_t>(i - 1)] = v / (u + v);
            return out;
        }
    }
    return out;
}

int ChainKernel::sample_step(int i, RngStream& rng) const {
    const double u = rng.next_uniform();
    if (i == 0 || i == N_) return i;
    const double x = xi(i);
    switch (kind_) {
        case KernelKind::WrightFisher: {
            // CDF inversion in ascending j. Terms below exp(-745) underflow
            // to zero and cannot move the accumulated CDF, so they are skipped
            // without being exponentiated.
            const double lx = std::log(x);
            const double l1x = std::log1p(-x);
            double cdf = 0.0;
            for (int j = 0; j < N_; ++j) {
                const double lp = log_choose(j) + j * lx + (N_ - j) * l1x;
                if (lp > -745.0) cdf += std::exp(lp);
                if (u < cdf) return j;
            }
            return N_;
        }
        case KernelKind::Moran: {
            const double down = (static_cast<double>(i) / N_) * (1.0 - x);
            const double up = (static_cast<double>(N_ - i) / N_) * x;
            if (u < down) return i - 1;
            if (u < down + (1.0 - up - down)) return i;
            return i + 1;
        }
        case KernelKind::EmbeddedMoran: {
            const double uu = static_cast<double>(N_ - i) * x;
            const double vv = static_cast<double>(i) * (1.0 - x);
            return (u < vv / (uu + vv)) ? i - 1 : i + 1;
        }
    }
    return i;
}

long long default_max_steps(KernelKind kind) {
    return kind == KernelKind::WrightFisher ? 10000000LL : 1000000000LL;
}

Trajectory simulate(const ChainKernel& kernel, int initial,
                    long long max_steps, RngStream& rng) {
    const int N = kernel.N();
    if (initial < 0 || initial > N) {
        throw std::invalid_argument("initial state outside {0..N}");
    }
    if (max_steps < 1) {
        throw std::invalid_argument("max_steps must be at least 1");
    }
    Trajectory tr;
    tr.initial = initial;
    tr.thin = N <= 1000 ? 1 : 10;
    tr.states.push_back(initial);
    if (initial == 0 || initial == N) {
        tr.absorbed_at = initial;
        return tr;
    }
    int state = initial;
    while (tr.steps < max_steps) {
        state = kernel.sample_step(state, rng);
        ++tr.steps;
        if (state == 0 || state == N) {
            tr.states.push_back(state);
            tr.absorbed_at = state;
            return tr;
        }
        if (tr.steps % tr.thin == 0) {
            tr.states.push_back(state);
        }
    }
    tr.censored = true;
    return tr;
}

McEstimate monte_carlo_fixation(const ChainKernel& kernel, int initial,
                                long long replicas, std::uint64_t seed,
                                RunMode mode, long long max_steps) {
    if (replicas < 1) {
        throw std::invalid_argument("replicas must be at least 1");
    }
    if (max_steps <= 0) max_steps = default_max_steps(kernel.kind());

    // Tallies: [0] fixed at N, [1] censored.
    const auto totals = run_replicas(
        replicas, seed, 2, mode,
        [&](long long, RngStream& rng, std::vector<long long>& tally) {
            const Trajectory tr = simulate(kernel, initial, max_steps, rng);
            if (tr.censored) {
                ++tally[1];
            } else if (tr.absorbed_at == kernel.N()) {
                ++tally[0];
            }
        });

    McEstimate est;
    est.replicas = replicas;
    est.censored = totals[1];
    const long long effective = replicas - est.censored;
    if (effective <= 0) {
        throw NumericalError("all replicas censored; raise max_steps");
    }
    est.point = static_cast<double>(totals[0]) / static_cast<double>(effective);
    est.std_error =
        std::sqrt(est.point * (1.0 - est.point) / static_cast<double>(effective));
    est.ci95 = {est.point - 1.96 * est.std_error, est.point + 1.96 * est.std_error};
    return est;
}

std::vector<TimeCdfPoint> empirical_time_cdf(const ChainKernel& kernel,
                                             int initial, long long replicas,
                                             std::uint64_t seed,
                                             const std::vector<long long>& horizons,
                                             RunMode mode) {
    if (horizons.empty()) return {};
    if (!std::is_sorted(horizons.begin(), horizons.end())) {
        throw std::invalid_argument("horizons must be sorted ascending");
    }
    if (horizons.front() < 0) {
        throw std::invalid_argument("horizons must be nonnegative");
    }
    // Absorption after the last horizon contributes to no bucket, so the
    // simulation never needs to run past horizons.back().
    const long long cutoff = std::max<long long>(horizons.back(), 1);

    const auto totals = run_replicas(
        replicas, seed, horizons.size(), mode,
        [&](long long, RngStream& rng, std::vector<long long>& tally) {
            const Trajectory tr = simulate(kernel, initial, cutoff, rng);
            if (!tr.absorbed_at.has_value()) return;
            for (std::size_t k = 0; k < horizons.size(); ++k) {
                if (tr.steps <= horizons[k]) ++tally[k];
            }
        });

    std::vector<TimeCdfPoint> out(horizons.size());
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        const double p =
            static_cast<double>(totals[k]) / static_cast<double>(replicas);
        out[k].horizon = horizons[k];
        out[k].probability = p;
        out[k].std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(replicas));
    }
    return out;
}

MonotonicityReport verify_stochastic_monotonicity(const ChainKernel& kernel) {
    if (kernel.kind() != KernelKind::WrightFisher) {
        throw std::invalid_argument(
            "stochastic monotonicity check targets the Wright-Fisher kernel");
    }
    const int N = kernel.N();
    MonotonicityReport report;

    // Interior row CDFs accumulated from the bottom and survival functions
    // accumulated from the top. Each representation is accurate in its own
    // tail and carries O(N eps) accumulation noise in the other, so a strict
    // signal from either side certifies strict dominance at that k; a real
    // violation would read non-strict on both.
    const std::size_t n = static_cast<std::size_t>(N) + 1;
    std::vector<std::vector<double>> cdf(static_cast<std::size_t>(N) - 1),
        surv(static_cast<std::size_t>(N) - 1);
    for (int i = 1; i < N; ++i) {
        const std::vector<double> r = kernel.row(i);
        std::vector<double> c(n), s(n);
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            acc += r[k];
            c[k] = acc;
        }
        acc = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            s[k] = acc;  // P(X > k)
            acc += r[k];
        }
        cdf[static_cast<std::size_t>(i - 1)] = std::move(c);
        surv[static_cast<std::size_t>(i - 1)] = std::move(s);
    }

    for (int i = 1; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            const auto& ci = cdf[static_cast<std::size_t>(i - 1)];
            const auto& cj = cdf[static_cast<std::size_t>(j - 1)];
            const auto& si = surv[static_cast<std::size_t>(i - 1)];
            const auto& sj = surv[static_cast<std::size_t>(j - 1)];
            for (int k = 0; k < N; ++k) {
                const std::size_t ku = static_cast<std::size_t>(k);
                const bool strict = ci[ku] > cj[ku] || si[ku] < sj[ku];
                if (!strict) {
                    report.monotone = false;
                    report.i = i;
                    report.j = j;
                    report.k = k;
                    return report;
                }
            }
        }
    }
    return report;
}

void write_trajectories_csv(const std::vector<Trajectory>& trajectories,
                            const std::string& path,
                            const std::vector<std::string>& metadata) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    for (const auto& line : metadata) {
        out << "# " << line << "\n";
    }
    out << "replica,step,state\n";
    for (std::size_t r = 0; r < trajectories.size(); ++r) {
        const Trajectory& tr = trajectories[r];
        for (std::size_t k = 0; k < tr.states.size(); ++k) {
            long long step = static_cast<long long>(k) * tr.thin;
            if (tr.absorbed_at.has_value() && k + 1 == tr.states.size()) {
                step = tr.steps;
            }
            out << r << "," << step << "," << tr.states[k] << "\n";
        }
    }
}

}  // namespace fixsim
