#pragma once

#include <cstdint>

#include "ehd/field.hpp"

namespace ehd {

/// Counter-based generator: value i of stream `seed` is a pure function of
/// (seed, i), so draws are reproducible across platforms and call orders.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix(key_ + counter * 0x9e3779b97f4a7c15ULL);
    }
    /// Uniform in [0, 1).
    double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }
    /// Standard normal (Box-Muller on counters 2c and 2c+1).
    double normal(std::uint64_t counter) const noexcept;

    /// Sequential convenience over the counter.
    double next_uniform() noexcept { return uniform(pos_++); }
    double next_normal() noexcept { return normal(pos_++); }

private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t key_;
    std::uint64_t pos_ = 0;
};

/// Random real field with Gaussian coefficients on retained modes with
/// 1 <= |k| <= kcut (mean zero), Hermitian by construction.
SpectralField random_spectral_field(const Grid& g, CounterRng& rng, double kcut);

/// Random divergence-free velocity with energy spectrum ~ k^4 exp(-2 (k/k0)^2),
/// scaled so that (1/2) mean |u|^2 = energy.
SpectralVectorField random_solenoidal_field(const Grid& g, std::uint64_t seed, double energy,
                                            double peak_wavenumber);

}  // namespace ehd
