#pragma once

#include <cstdint>
#include <cstddef>

namespace roomsrl::nn {

// Seedable counter-based random stream (splitmix64 core). Streams can be
// split into independent children by index; splitting depends only on the
// seed the stream was created with, never on how many values were drawn,
// so per-episode child streams are stable regardless of consumption order.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    // Independent child stream; distinct ids give decorrelated streams.
    RandomStream split(std::uint64_t stream_id) const;

    std::uint64_t next_u64();

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double();

    double uniform(double lo, double hi);

    // Uniform index in [0, n); n must be positive.
    std::size_t uniform_index(std::size_t n);

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace roomsrl::nn
