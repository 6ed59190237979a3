#include "fixsim/rng.hpp"

#include <cstdlib>

#include <omp.h>

namespace fixsim {

namespace {

// SplitMix64 step, used only to spread (seed, stream) into seed material.
std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index) {
    // Decorrelate streams by mixing the pair through SplitMix64 before
    // seeding the engine; adjacent (seed, stream) pairs must not produce
    // related mt19937_64 states.
    std::uint64_t s = seed ^ (stream_index * 0xda942042e4dd58b5ULL);
    std::seed_seq seq{
        static_cast<std::uint32_t>(splitmix64(s)),
        static_cast<std::uint32_t>(splitmix64(s) >> 32),
        static_cast<std::uint32_t>(splitmix64(s)),
        static_cast<std::uint32_t>(splitmix64(s) >> 32),
        static_cast<std::uint32_t>(splitmix64(s)),
        static_cast<std::uint32_t>(splitmix64(s) >> 32),
        static_cast<std::uint32_t>(splitmix64(s)),
        static_cast<std::uint32_t>(splitmix64(s) >> 32),
    };
    engine_.seed(seq);
}

double RngStream::next_uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int effective_threads() {
    int hw = omp_get_max_threads();
    if (const char* env = std::getenv("FIXSIM_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v < 1024) {
            return static_cast<int>(v);
        }
    }
    return hw;
}

}  // namespace fixsim
