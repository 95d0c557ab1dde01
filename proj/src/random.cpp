#include "ehd/random.hpp"

#include <cmath>
#include <numbers>

#include "ehd/spectral.hpp"

namespace ehd {

double CounterRng::normal(std::uint64_t counter) const noexcept {
    const double u1 = 1.0 - uniform(2 * counter);  // (0, 1]
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SpectralField random_spectral_field(const Grid& g, CounterRng& rng, double kcut) {
    SpectralField F(g);
    auto c = F.coeffs();
    const double kc2 = kcut * kcut;
    for (std::size_t m = 0; m < c.size(); ++m) {
        const double re = rng.next_normal();
        const double im = rng.next_normal();
        if (m == 0 || !g.retained(m) || g.k2(m) > kc2) continue;
        c[m] = Complex(re, im);
    }
    hermitian_symmetrize(F);
    return F;
}

SpectralVectorField random_solenoidal_field(const Grid& g, std::uint64_t seed, double energy,
                                            double peak_wavenumber) {
    CounterRng rng(seed, 1);
    auto U = SpectralVectorField::zeros(g);
    for (int i = 0; i < 3; ++i) {
        auto c = U[i].coeffs();
        for (std::size_t m = 0; m < c.size(); ++m) {
            const double re = rng.next_normal();
            const double im = rng.next_normal();
            if (m == 0 || !g.retained(m)) continue;
            const double k = std::sqrt(g.k2(m));
            const double x = k / peak_wavenumber;
            // Shell energy E(k) ~ k^4 exp(-2x^2) spread over ~4 pi k^2 modes.
            const double amp = std::sqrt(k * k * std::exp(-2.0 * x * x));
            c[m] = amp * Complex(re, im);
        }
        hermitian_symmetrize(U[i]);
    }
    U = leray_project(U);
    const double current = 0.5 * l2_squared(U) / Grid::volume();
    if (current > 0.0) U *= std::sqrt(energy / current);
    return U;
}

}  // namespace ehd
