#include "drgrade/common/rng.hpp"

#include <cmath>

namespace drg {

namespace {

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

RngState::RngState(uint64_t seed, std::string_view stream)
    : seed_(seed), stream_(stream), state_(seed ^ fnv1a64(stream)) {
    // Two warm-up steps decorrelate adjacent (seed, stream) pairs.
    next_u64();
    next_u64();
}

RngState RngState::fork(std::string_view name) const {
    std::string child = stream_.empty() ? std::string(name) : stream_ + "/" + std::string(name);
    return RngState(seed_, child);
}

uint64_t RngState::next_u64() {
    return splitmix64(state_);
}

double RngState::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngState::uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
}

double RngState::normal() {
    // u1 in (0, 1] keeps the log argument positive.
    double u1 = 1.0 - next_double();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double RngState::normal(double mean, double stddev) {
    return mean + stddev * normal();
}

uint64_t RngState::below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t bound = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t x;
    do {
        x = next_u64();
    } while (x >= bound);
    return x % n;
}

} // namespace drg
