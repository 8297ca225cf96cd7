// rng.hpp — Deterministic stream RNG. Streams are keyed by
// (master_seed, domain, trial_id, sub_id), so any trial can be generated
// independently of evaluation order or thread count. The generator is
// xoshiro256++ seeded through splitmix64; gaussians use Box-Muller on
// 53-bit uniforms, keeping the byte stream identical across platforms.

#pragma once

#include <complex>
#include <cstdint>

namespace qds::rng {

// Disjoint key spaces for the different consumers of randomness.
enum class Domain : std::uint64_t {
    Sample = 0,    // generator draws (trial_id, sub_id)
    Bootstrap = 1, // resampling indices in report assembly
    Snapshot = 2,  // freezing parametric families into discrete mixtures
    MeanMap = 3,   // Monte Carlo mean-map estimation
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Stream {
  public:
    Stream(std::uint64_t master_seed, Domain domain, std::uint64_t trial_id,
           std::uint64_t sub_id);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double next_double();

    // Uniform index in [0, bound) via rejection-free 128-bit scaling.
    std::uint64_t next_index(std::uint64_t bound);

    // Standard normal N(0, 1).
    double next_gaussian();

    // Complex standard normal CN(0, 1): E|z|^2 = 1.
    std::complex<double> next_complex_gaussian();

  private:
    std::uint64_t s_[4];
    double spare_gaussian_ = 0.0;
    bool has_spare_ = false;
};

} // namespace qds::rng
