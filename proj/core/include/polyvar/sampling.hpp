#ifndef POLYVAR_SAMPLING_HPP
#define POLYVAR_SAMPLING_HPP

#include <cstdint>
#include <random>

#include "polyvar/linalg.hpp"

namespace polyvar {

/// Deterministic seeded sampling plan for rational draws p/q with bounded
/// denominator. Identical spec, identical draws.
struct SampleSpec {
    std::size_t count = 100;
    Rat radius = Rat(1);
    std::uint64_t seed = 0;
    unsigned denominator_bound = 32;
};

class RatSampler {
public:
    explicit RatSampler(std::uint64_t seed) : rng_(seed) {}
    explicit RatSampler(const SampleSpec& spec)
        : rng_(spec.seed), denom_bound_(spec.denominator_bound) {}

    /// Uniform-ish rational in [-radius, radius] with denominator <= bound.
    Rat draw(const Rat& radius) {
        std::uniform_int_distribution<unsigned> qd(1, denom_bound_);
        const unsigned q = qd(rng_);
        // largest p with p/q <= radius
        const mpz_class nmax_z = (radius.get_num() * q) / radius.get_den();
        const long nmax = nmax_z.fits_slong_p() ? nmax_z.get_si() : 1L << 30;
        if (nmax <= 0) return Rat(0);
        std::uniform_int_distribution<long> pd(-nmax, nmax);
        return rat(pd(rng_), q);
    }

    /// Vector with Euclidean norm <= radius (per-coordinate bound radius/dim).
    RVec draw_vec(std::size_t dim, const Rat& radius) {
        RVec v(dim);
        const Rat per = radius / Rat(static_cast<long>(dim == 0 ? 1 : dim));
        for (auto& x : v) x = draw(per);
        return v;
    }

    /// Nonnegative rational in [0, hi].
    Rat draw_nonneg(const Rat& hi) { return rat_abs(draw(hi)); }

    std::size_t index(std::size_t n) {
        std::uniform_int_distribution<std::size_t> d(0, n - 1);
        return d(rng_);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
    unsigned denom_bound_ = 32;
};

}  // namespace polyvar

#endif
