#include "fixsim/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "fixsim/montecarlo.hpp"

namespace fixsim {

double FiniteDistribution::mass() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
}

FiniteDistribution binomial_pmf(int N, double prob) {
    if (N < 0 || !(prob >= 0.0 && prob <= 1.0)) {
        throw std::invalid_argument("binomial_pmf needs N >= 0 and prob in [0,1]");
    }
    FiniteDistribution dist;
    dist.p.assign(static_cast<std::size_t>(N) + 1, 0.0);
    if (prob == 0.0) {
        dist.p[0] = 1.0;
        return dist;
    }
    if (prob == 1.0) {
        dist.p[static_cast<std::size_t>(N)] = 1.0;
        return dist;
    }
    std::vector<double> log_fact(static_cast<std::size_t>(N) + 1, 0.0);
    for (int k = 1; k <= N; ++k) {
        log_fact[static_cast<std::size_t>(k)] =
            log_fact[static_cast<std::size_t>(k - 1)] + std::log(static_cast<double>(k));
    }
    const double lp = std::log(prob);
    const double l1p = std::log1p(-prob);
    for (int j = 0; j <= N; ++j) {
        const double lc = log_fact[static_cast<std::size_t>(N)] -
                          log_fact[static_cast<std::size_t>(j)] -
                          log_fact[static_cast<std::size_t>(N - j)];
        dist.p[static_cast<std::size_t>(j)] = std::exp(lc + j * lp + (N - j) * l1p);
    }
    return dist;
}

FiniteDistribution poisson_pmf(double lambda) {
    if (!(lambda >= 0.0) || lambda > 600.0) {
        throw std::invalid_argument(
            "poisson_pmf supports lambda in [0, 600] (pmf recurrence regime)");
    }
    FiniteDistribution dist;
    if (lambda == 0.0) {
        dist.p.assign(1, 1.0);
        return dist;
    }
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    dist.p.push_back(pmf);
    long long j = 0;
    while (cdf < 1.0 - 1e-15) {
        ++j;
        pmf *= lambda / static_cast<double>(j);
        cdf += pmf;
        dist.p.push_back(pmf);
        if (j > 100000) break;
    }
    // Fold the truncated tail into the top state so the vector is a genuine
    // probability distribution.
    dist.p.back() += std::max(0.0, 1.0 - cdf);
    return dist;
}

double tv_distance(const FiniteDistribution& p, const FiniteDistribution& q) {
    const std::size_t n = std::max(p.p.size(), q.p.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double pv = k < p.p.size() ? p.p[k] : 0.0;
        const double qv = k < q.p.size() ? q.p[k] : 0.0;
        acc += std::fabs(pv - qv);
    }
    return 0.5 * acc;
}

MaximalCoupling::MaximalCoupling(FiniteDistribution p, FiniteDistribution q)
    : p_(std::move(p)), q_(std::move(q)) {
    const std::size_t n = std::max(p_.p.size(), q_.p.size());
    p_.p.resize(n, 0.0);
    q_.p.resize(n, 0.0);
    overlap_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        overlap_[k] = std::min(p_.p[k], q_.p[k]);
    }
    delta_ = tv_distance(p_, q_);
}

std::pair<long long, long long> MaximalCoupling::sample(RngStream& rng) const {
    const double u = rng.next_uniform();
    // Composition: u below the overlap mass selects the common component and
    // doubles as the inversion variable against the unnormalized overlap CDF.
    double cdf = 0.0;
    const double overlap_mass = 1.0 - delta_;
    if (u < overlap_mass) {
        for (std::size_t k = 0; k < overlap_.size(); ++k) {
            cdf += overlap_[k];
            if (u < cdf) {
                const long long v = static_cast<long long>(k);
                return {v, v};
            }
        }
        // Rounding slipped past the last overlap state; take the topmost
        // state carrying overlap mass.
        for (std::size_t k = overlap_.size(); k-- > 0;) {
            if (overlap_[k] > 0.0) {
                const long long v = static_cast<long long>(k);
                return {v, v};
            }
        }
    }
    // Residual components, inverted independently in ascending order against
    // the unnormalized positive parts (each has total mass delta).
    const double up = rng.next_uniform() * delta_;
    const double uq = rng.next_uniform() * delta_;
    long long x = -1, y = -1;
    cdf = 0.0;
    long long last_pos = 0;
    for (std::size_t k = 0; k < p_.p.size(); ++k) {
        const double res = p_.p[k] - q_.p[k];
        if (res > 0.0) {
            cdf += res;
            last_pos = static_cast<long long>(k);
            if (up < cdf) {
                x = static_cast<long long>(k);
                break;
            }
        }
    }
    if (x < 0) x = last_pos;
    cdf = 0.0;
    last_pos = 0;
    for (std::size_t k = 0; k < q_.p.size(); ++k) {
        const double res = q_.p[k] - p_.p[k];
        if (res > 0.0) {
            cdf += res;
            last_pos = static_cast<long long>(k);
            if (uq < cdf) {
                y = static_cast<long long>(k);
                break;
            }
        }
    }
    if (y < 0) y = last_pos;
    return {x, y};
}

std::pair<long long, long long> maximal_coupling_sample(const FiniteDistribution& p,
                                                        const FiniteDistribution& q,
                                                        RngStream& rng) {
    return MaximalCoupling(p, q).sample(rng);
}

std::vector<TripleState> monotone_triple_simulate(const GameSpec& spec, int N,
                                                  int i, int steps,
                                                  RngStream& rng) {
    const DominanceCertificate cert = certify_dominance(spec);
    if (N < cert.N0) {
        throw BelowN0("N=" + std::to_string(N) +
                      " is below the certified threshold N0=" +
                      std::to_string(cert.N0));
    }
    PopulationPoint start(N, i);
    if (!start.interior()) {
        throw std::invalid_argument("triple coupling starts from an interior state");
    }
    const ChainKernel kernel = ChainKernel::wright_fisher(spec, N);

    // Success thresholds for the three chains. Replacing g/f by gamma in
    //   xi(j) = j f / (j f + (N-j) g) = j / (j + (N-j) g/f)
    // lowers the success probability, replacing it by alpha raises it, so
    //   eta(j) <= xi(j) <= zeta(j) pointwise.
    const auto eta = [&](int j) {
        return static_cast<double>(j) /
               (static_cast<double>(j) + cert.gamma * static_cast<double>(N - j));
    };
    const auto zeta = [&](int j) {
        return static_cast<double>(j) /
               (static_cast<double>(j) + cert.alpha * static_cast<double>(N - j));
    };

    std::vector<TripleState> path;
    path.reserve(static_cast<std::size_t>(steps) + 1);
    TripleState s{i, i, i};
    path.push_back(s);
    for (int t = 0; t < steps; ++t) {
        const double t1 = eta(s.x1);
        const double t2 = kernel.xi(s.x2);
        const double t3 = zeta(s.x3);
        int c1 = 0, c2 = 0, c3 = 0;
        for (int k = 0; k < N; ++k) {
            const double u = rng.next_uniform();
            if (u < t1) ++c1;
            if (u < t2) ++c2;
            if (u < t3) ++c3;
        }
        s = TripleState{c1, c2, c3};
        path.push_back(s);
    }
    return path;
}

WfBpCoupler::WfBpCoupler(const GameSpec& spec, int N)
    : spec_(spec),
      N_(N),
      cert_(certify_dominance(spec)),
      kernel_(ChainKernel::wright_fisher(spec, N)) {
    if (N < cert_.N0) {
        throw BelowN0("N=" + std::to_string(N) +
                      " is below the certified threshold N0=" +
                      std::to_string(cert_.N0));
    }
}

const MaximalCoupling& WfBpCoupler::coupling_at(int i) {
    auto it = cache_.find(i);
    if (it == cache_.end()) {
        it = cache_
                 .emplace(i, MaximalCoupling(binomial_pmf(N_, kernel_.xi(i)),
                                             poisson_pmf(cert_.lambda * i)))
                 .first;
    }
    return it->second;
}

CoupledPaths WfBpCoupler::run(int k, long long max_steps, RngStream& rng) {
    if (k < 1 || k >= N_) {
        throw std::invalid_argument("coupled start needs N > k >= 1");
    }
    CoupledPaths out;
    out.x.initial = k;
    out.x.thin = 1;
    out.x.states.push_back(k);
    out.z.initial = k;
    out.z.states.push_back(k);

    int xi_state = k;
    long long z_state = k;
    long long step = 0;

    // Coupled phase: both components share one maximal-coupling draw per
    // step while they agree on an interior state. Past the pmf cap of
    // poisson_pmf the maximal coupling cannot be tabulated; an independent
    // pair is still a valid coupling with exact marginals, and at those
    // population sizes the two distributions barely overlap anyway, so the
    // recorded tau stays a sound upper-bound proxy.
    while (step < max_steps && !out.tau.has_value() && xi_state == z_state &&
           xi_state > 0 && xi_state < N_) {
        long long xn, zn;
        if (cert_.lambda * xi_state <= 600.0) {
            std::tie(xn, zn) = coupling_at(xi_state).sample(rng);
        } else {
            xn = kernel_.sample_step(xi_state, rng);
            zn = 0;
            for (long long ind = 0; ind < z_state; ++ind) {
                zn += poisson_sample(cert_.lambda, rng);
            }
        }
        ++step;
        xi_state = static_cast<int>(xn);
        z_state = zn;
        out.x.states.push_back(xi_state);
        out.x.steps = step;
        out.z.states.push_back(z_state);
        out.z.steps = step;
        if (xn != zn) out.tau = step;
    }

    // Independent phase for the Wright-Fisher component.
    while (step < max_steps && xi_state > 0 && xi_state < N_) {
        xi_state = kernel_.sample_step(xi_state, rng);
        ++step;
        out.x.states.push_back(xi_state);
        out.x.steps = step;
    }
    if (xi_state == 0 || xi_state == N_) {
        out.x.absorbed_at = xi_state;
    } else {
        out.x.censored = true;
    }

    // Independent phase for the branching component, stopping at 0 or N.
    long long z_step = out.z.steps;
    while (z_step < max_steps && z_state > 0 && z_state < N_) {
        long long next = 0;
        for (long long ind = 0; ind < z_state; ++ind) {
            next += poisson_sample(cert_.lambda, rng);
        }
        z_state = next;
        ++z_step;
        out.z.states.push_back(z_state);
        out.z.steps = z_step;
    }
    if (z_state == 0 || z_state >= N_) {
        out.z.sigma = z_step;
    } else {
        out.z.censored = true;
    }
    return out;
}

CoupledPaths coupled_wf_bp_simulate(const GameSpec& spec, int N, int k,
                                    long long max_steps, RngStream& rng) {
    WfBpCoupler coupler(spec, N);
    return coupler.run(k, max_steps, rng);
}

double estimate_c0(const GameSpec& spec, int N, int J, long long replicas,
                   std::uint64_t seed, RunMode mode) {
    if (J < 1 || J > N) {
        throw std::invalid_argument("estimate_c0 needs 1 <= J <= N");
    }
    if (replicas < 1) {
        throw std::invalid_argument("estimate_c0 needs replicas >= 1");
    }
    WfBpCoupler coupler(spec, N);
    if (coupler.certificate().lambda * J > 600.0) {
        throw std::invalid_argument(
            "estimate_c0 needs lambda * J <= 600 (poisson pmf tabulation cap)");
    }
    double best = 0.0;
    for (int i = 1; i <= J; ++i) {
        const MaximalCoupling& coupling = coupler.coupling_at(i);
        // Decorrelate the per-state experiments while keeping each replica
        // on its own deterministic stream.
        const std::uint64_t state_seed =
            seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i));
        const auto totals = run_replicas(
            replicas, state_seed, 1, mode,
            [&](long long, RngStream& rng, std::vector<long long>& tally) {
                const auto [x, z] = coupling.sample(rng);
                if (x != z) ++tally[0];
            });
        const double rate =
            static_cast<double>(totals[0]) / static_cast<double>(replicas);
        const double scaled = rate * static_cast<double>(N) /
                              std::pow(static_cast<double>(i), 1.5);
        best = std::max(best, scaled);
    }
    return best;
}

}  // namespace fixsim
