#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "ehd/grid.hpp"

namespace ehd {

using Complex = std::complex<double>;

/// n^3 real samples at the uniform nodes of a grid.
class RealField {
public:
    explicit RealField(Grid grid) : grid_(std::move(grid)), samples_(grid_.size(), 0.0) {}
    RealField(Grid grid, std::vector<double> samples);

    /// Samples f(x1, x2, x3) at every node.
    template <typename F>
    static RealField sample(const Grid& grid, F&& f) {
        RealField out(grid);
        const int n = grid.n();
        std::size_t idx = 0;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    out.samples_[idx++] = f(grid.node(i), grid.node(j), grid.node(k));
        return out;
    }

    const Grid& grid() const noexcept { return grid_; }
    std::span<double> samples() noexcept { return samples_; }
    std::span<const double> samples() const noexcept { return samples_; }
    double& operator[](std::size_t i) noexcept { return samples_[i]; }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }

    double mean() const;
    double min() const;
    double max_abs() const;

    RealField& operator+=(const RealField& o);
    RealField& operator-=(const RealField& o);
    RealField& operator*=(double s);

private:
    Grid grid_;
    std::vector<double> samples_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(RealField a, double s);
/// Pointwise product.
RealField multiply(const RealField& a, const RealField& b);

/// Coefficients F(k) of f = sum_k F(k) exp(i k.x) in the grid's half layout.
class SpectralField {
public:
    explicit SpectralField(Grid grid) : grid_(std::move(grid)), coeffs_(grid_.spectral_size()) {}
    SpectralField(Grid grid, std::vector<Complex> coeffs);

    const Grid& grid() const noexcept { return grid_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    Complex& operator[](std::size_t m) noexcept { return coeffs_[m]; }
    const Complex& operator[](std::size_t m) const noexcept { return coeffs_[m]; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    /// Coefficient at an arbitrary wavenumber (negative kx via conjugate symmetry).
    Complex at(int kx, int ky, int kz) const;
    /// Sets the coefficient at (kx, ky, kz) and its conjugate partner.
    void set(int kx, int ky, int kz, Complex value);

    Complex mean() const noexcept { return coeffs_[0]; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);

private:
    Grid grid_;
    std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(SpectralField a, double s);

/// Three components on one grid.
template <typename Field>
struct Vector3 {
    std::array<Field, 3> c;

    Field& operator[](int i) noexcept { return c[i]; }
    const Field& operator[](int i) const noexcept { return c[i]; }
    const Grid& grid() const noexcept { return c[0].grid(); }

    static Vector3 zeros(const Grid& g) { return {{Field(g), Field(g), Field(g)}}; }

    Vector3& operator+=(const Vector3& o) {
        for (int i = 0; i < 3; ++i) c[i] += o.c[i];
        return *this;
    }
    Vector3& operator-=(const Vector3& o) {
        for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vector3& operator*=(double s) {
        for (auto& f : c) f *= s;
        return *this;
    }
};

using VectorField = Vector3<RealField>;
using SpectralVectorField = Vector3<SpectralField>;

template <typename Field>
Vector3<Field> operator+(Vector3<Field> a, const Vector3<Field>& b) { return a += b; }
template <typename Field>
Vector3<Field> operator-(Vector3<Field> a, const Vector3<Field>& b) { return a -= b; }
template <typename Field>
Vector3<Field> operator*(Vector3<Field> a, double s) { return a *= s; }

/// Throws GridMismatch unless all components share a grid.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace ehd
