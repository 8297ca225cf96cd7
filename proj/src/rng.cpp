// rng.cpp — xoshiro256++ streams with splitmix64 key derivation

#include "qds/rng.hpp"

#include <cmath>
#include <numbers>

namespace qds::rng {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

Stream::Stream(std::uint64_t master_seed, Domain domain, std::uint64_t trial_id,
               std::uint64_t sub_id) {
    // Fold the key components through splitmix64 so that nearby keys
    // (consecutive trial ids) land in unrelated states.
    std::uint64_t key = master_seed;
    key = splitmix64(key) ^ (static_cast<std::uint64_t>(domain) * 0xa0761d6478bd642fULL);
    key = splitmix64(key) ^ (trial_id * 0xe7037ed1a0b428dbULL);
    key = splitmix64(key) ^ (sub_id * 0x8ebc6af09c88c6e3ULL);
    for (auto& word : s_) {
        word = splitmix64(key);
    }
}

std::uint64_t Stream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Stream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Stream::next_index(std::uint64_t bound) {
    const auto wide = static_cast<unsigned __int128>(next_u64()) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
}

double Stream::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_gaussian_;
    }
    // Box-Muller; u1 is kept away from zero so the log stays finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_gaussian_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::complex<double> Stream::next_complex_gaussian() {
    const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    const double re = next_gaussian();
    const double im = next_gaussian();
    return {re * inv_sqrt2, im * inv_sqrt2};
}

} // namespace qds::rng
