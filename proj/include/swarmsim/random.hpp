#pragma once

#include <cstdint>
#include <random>

namespace swarmsim {

/// SplitMix64 finalizer. Used only for deriving seeds, never as a stream.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent sub-streams of one run.
enum class StreamId : std::uint64_t {
    Placement = 1,
    Schedule = 2,
    Perception = 3,
    Motion = 4,
    Compute = 5,
};

/// Counter-based seed derivation: seed(master, index, stream) depends only
/// on its arguments, so run i gets the same seed whichever worker runs it.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, StreamId stream) {
    return mix64(derive_seed(master, index) ^ (static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ULL));
}

/// 64-bit Mersenne Twister with hand-rolled, portable distributions
/// (std:: distributions differ between standard libraries).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform in (0, 1].
    double uniform01_open_closed() { return 1.0 - uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        // Lemire-style rejection keeps the result exactly uniform.
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace swarmsim
