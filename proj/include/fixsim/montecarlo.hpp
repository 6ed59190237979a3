#pragma once

#include <cstdint>
#include <vector>

#include <omp.h>

#include "fixsim/rng.hpp"

namespace fixsim {

// Deterministic replica driver shared by every Monte Carlo routine in the
// library. The body receives (replica_index, its own RngStream, tally) and
// may only communicate through integer tallies; those are summed across
// replicas, so any thread schedule yields the exact same totals as the
// serial reference loop.
template <class Body>
std::vector<long long> run_replicas(long long replicas, std::uint64_t seed,
                                    std::size_t n_tallies, RunMode mode,
                                    Body&& body) {
    std::vector<long long> total(n_tallies, 0);
    if (mode == RunMode::Serial) {
        for (long long r = 0; r < replicas; ++r) {
            RngStream rng(seed, static_cast<std::uint64_t>(r));
            body(r, rng, total);
        }
        return total;
    }
#pragma omp parallel num_threads(effective_threads())
    {
        std::vector<long long> local(n_tallies, 0);
#pragma omp for schedule(dynamic, 64) nowait
        for (long long r = 0; r < replicas; ++r) {
            RngStream rng(seed, static_cast<std::uint64_t>(r));
            body(r, rng, local);
        }
#pragma omp critical
        {
            for (std::size_t k = 0; k < n_tallies; ++k) total[k] += local[k];
        }
    }
    return total;
}

}  // namespace fixsim
