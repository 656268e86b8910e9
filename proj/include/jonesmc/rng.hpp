#pragma once

// Counter-based random numbers.  Every (seed, stream) pair addresses an
// independent sequence; the k-th draw is a pure function of (key, k), so
// ensembles partitioned by sample index reproduce bit-for-bit regardless of
// worker count or schedule.

#include <cmath>
#include <cstdint>

namespace jonesmc {

namespace detail {
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
} // namespace detail

class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream)
        : key_(seed ^ detail::mix64(stream + 0x632be59bd9b4e019ull)) {}

    uint64_t next_u64() {
        ++counter_;
        return detail::mix64(key_ + counter_ * 0x9e3779b97f4a7c15ull);
    }

    /// uniform on [0, 1)
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// uniform on (0, 1]
    double uniform01_open_low() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// strictly positive exponential variate
    double exponential(double mean) { return -mean * std::log(uniform01_open_low()); }

    double gaussian(double mean, double sigma) {
        // Box-Muller; no state carried between draws so replay stays exact
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

} // namespace jonesmc
