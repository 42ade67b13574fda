#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace drg {

// Deterministic named-stream generator. A stream is identified by (seed, stream
// name); the same (seed, stream, call sequence) produces the same values no
// matter which order streams are created or interleaved. Core output is the
// splitmix64 sequence; uniform doubles are exact (53-bit mantissa fill), so
// integer and uniform draws are reproducible across platforms. normal() goes
// through libm (log/cos) and is reproducible per platform.
class RngState {
public:
    explicit RngState(uint64_t seed, std::string_view stream = "");

    // Derives the stream "<parent>/<name>". Identity depends only on the full
    // stream name and seed, never on draw order.
    RngState fork(std::string_view name) const;

    uint64_t seed() const { return seed_; }
    const std::string& stream() const { return stream_; }

    uint64_t next_u64();

    // Uniform in [0, 1).
    double next_double();
    double uniform(double lo, double hi);

    // Standard normal via Box-Muller; consumes two uniform draws per call.
    double normal();
    double normal(double mean, double stddev);

    // Unbiased integer in [0, n); n == 0 or 1 returns 0 without drawing.
    uint64_t below(uint64_t n);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t seed_ = 0;
    std::string stream_;
    uint64_t state_ = 0;
};

} // namespace drg
