#pragma once

#include <cstdint>
#include <random>

#include "qblab/graded.hpp"

namespace qblab {

/// Deterministic sampler. All draws go through mt19937_64 with an explicit
/// 53-bit mantissa mapping so streams are identical across platforms.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}

    /// Derive an independent stream for a named case from a base seed.
    static Sampler derive(std::uint64_t seed, std::uint64_t case_tag) {
        // splitmix64 mix of (seed, tag)
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (case_tag + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Sampler(z ^ (z >> 31));
    }

    double uniform() {  // [0,1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Modulus in [lo,hi], uniformly random phase.
    cplx annulus(double lo, double hi) {
        const double r = uniform(lo, hi);
        const double th = uniform(0.0, 6.283185307179586);
        return cplx(r * std::cos(th), r * std::sin(th));
    }

    /// Deformation parameter away from 0, roots of unity and |q| = 1.
    cplx q_sample(double lo = 0.3, double hi = 0.7) { return annulus(lo, hi); }

    /// Nonzero spectral parameter with modulus in a moderate band.
    cplx spectral() { return annulus(0.5, 2.0); }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace qblab
