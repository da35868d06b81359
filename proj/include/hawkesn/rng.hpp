#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hawkesn {

/// Seeded generator with hand-rolled variate transforms so simulation output
/// is reproducible per seed independent of the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1); never returns 0 so logs stay finite.
    double uniform() {
        const std::uint64_t bits = engine_() >> 11;  // 53 random bits
        double u = static_cast<double>(bits) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    /// Pareto with density (alpha-1) m^{-alpha} on [1, inf).
    double pareto_mark(double alpha) { return std::pow(uniform(), -1.0 / (alpha - 1.0)); }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace hawkesn
