#pragma once

#include <cstdint>
#include <random>

namespace fixsim {

// One reproducible random stream. Replica r of a Monte Carlo run uses
// stream_index r under the run's seed, so results do not depend on how
// replicas are scheduled over threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    // Uniform on [0,1) with 53 random bits, one engine draw per call.
    double next_uniform();

    std::uint64_t next_u64() { return engine_(); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

// How a replica loop is executed. Serial is the reference implementation;
// Parallel distributes replicas over OpenMP threads. Both produce identical
// results because replica r always consumes stream r and the accumulators
// are integer sums.
enum class RunMode { Serial, Parallel };

// Worker cap honoring the FIXSIM_THREADS environment variable
// (default: hardware concurrency as reported by OpenMP).
int effective_threads();

}  // namespace fixsim
