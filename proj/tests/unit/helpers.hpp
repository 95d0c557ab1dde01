#pragma once

#include <algorithm>
#include <cmath>

#include "ehd/random.hpp"
#include "ehd/spectral.hpp"

namespace ehd::test {

inline double max_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_diff(const VectorField& a, const VectorField& b) {
    return std::max({max_diff(a[0], b[0]), max_diff(a[1], b[1]), max_diff(a[2], b[2])});
}

inline double max_abs(const SpectralField& F) {
    double m = 0.0;
    for (auto c : F.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

/// Band-limited random field with O(1) samples.
inline RealField random_field(const Grid& g, std::uint64_t seed, double kcut = 6.0) {
    CounterRng rng(seed, 17);
    return backward_transform(random_spectral_field(g, rng, kcut));
}

inline VectorField random_vector(const Grid& g, std::uint64_t seed, double kcut = 6.0) {
    return {{random_field(g, 3 * seed, kcut), random_field(g, 3 * seed + 1, kcut), random_field(g, 3 * seed + 2, kcut)}};
}

}  // namespace ehd::test
