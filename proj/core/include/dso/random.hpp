#ifndef DSO_RANDOM_HPP
#define DSO_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace dso {

// Seeded random stream. Every draw is derived from raw mt19937_64 output with
// fixed arithmetic, so sequences are identical across standard libraries
// (std::*_distribution are implementation-defined and are not used here).
class Random {
public:
    explicit Random(std::uint64_t seed = 0) : engine_(seed) {}

    // U[0,1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    // U[lo,hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Box-Muller, one cosine branch per call (no cached spare).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }
    // Uniform integer in [0, n); n must be positive.
    std::size_t index(std::size_t n);

    std::uint64_t next() { return engine_(); }

    // Independent child stream, e.g. one per run or per thread.
    Random split() { return Random(engine_() ^ 0x9e3779b97f4a7c15ULL); }

private:
    std::mt19937_64 engine_;
};

} // namespace dso

#endif
