#pragma once

#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

namespace ehd {

namespace detail {
struct FftPlans;
}

/// Periodic cube [0, 2pi)^3 sampled at n^3 nodes.
///
/// Physical samples are stored x-fastest: index = i + n*(j + n*k) with i along x1.
/// Spectral coefficients use the real-to-complex half layout: index =
/// a + nh*(b + n*c) with nh = n/2 + 1, a the (non-negative) x1 wavenumber and
/// b, c the FFT-ordered x2, x3 indices. Modes with a = 0 or a = n/2 are stored
/// once; every other stored mode stands for itself and its conjugate partner.
///
/// Copies are cheap and share the wavenumber tables and FFT plans.
class Grid {
public:
    explicit Grid(int n);

    int n() const noexcept { return n_; }
    int nh() const noexcept { return n_ / 2 + 1; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_ * n_; }
    std::size_t spectral_size() const noexcept {
        return static_cast<std::size_t>(n_) * n_ * nh();
    }
    static constexpr double length() noexcept { return 2.0 * std::numbers::pi; }
    double dx() const noexcept { return length() / n_; }
    double cell_volume() const noexcept { return dx() * dx() * dx(); }
    static constexpr double volume() noexcept { return length() * length() * length(); }

    /// Largest retained |k_i| under the 2/3 rule.
    int kmax() const noexcept { return n_ / 3; }

    /// Signed wavenumber of FFT index a in -n/2..n/2-1.
    int wavenumber(int a) const noexcept { return a < n_ / 2 ? a : a - n_; }

    /// Integer wavenumber triple of spectral index m. The x1 component is
    /// always >= 0 (half layout).
    struct Mode {
        int kx, ky, kz;
    };
    Mode mode(std::size_t m) const noexcept {
        const int a = static_cast<int>(m % nh());
        const int b = static_cast<int>((m / nh()) % n_);
        const int c = static_cast<int>(m / (static_cast<std::size_t>(nh()) * n_));
        return {a, wavenumber(b), wavenumber(c)};
    }
    double k2(std::size_t m) const noexcept { return (*k2_)[m]; }
    bool retained(std::size_t m) const noexcept { return (*mask_)[m] != 0; }

    /// Multiplicity of a stored mode in full-spectrum sums (1 or 2).
    double weight(std::size_t m) const noexcept {
        const int a = static_cast<int>(m % nh());
        return (a == 0 || a == n_ / 2) ? 1.0 : 2.0;
    }

    /// Spectral index of the conjugate partner of a stored a = 0 mode.
    std::size_t partner(std::size_t m) const noexcept;

    std::size_t spectral_index(int a, int b, int c) const noexcept {
        return static_cast<std::size_t>(a) + nh() * (static_cast<std::size_t>(b) + n_ * c);
    }
    /// Spectral index for a wavenumber triple; kx must be in 0..n/2.
    std::size_t index_of(int kx, int ky, int kz) const noexcept {
        return spectral_index(kx, (ky + n_) % n_, (kz + n_) % n_);
    }

    double node(int i) const noexcept { return dx() * i; }

    const detail::FftPlans& plans() const noexcept { return *plans_; }

    friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.n_ == b.n_; }

private:
    int n_;
    std::shared_ptr<const std::vector<double>> k2_;
    std::shared_ptr<const std::vector<unsigned char>> mask_;
    std::shared_ptr<const detail::FftPlans> plans_;
};

/// Cap internal FFT threads (EHD_THREADS). Affects grids created afterwards.
void set_max_threads(int threads);
int max_threads();

}  // namespace ehd
