#include "ehd/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ehd/error.hpp"

namespace ehd {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b))
        throw Error(ErrorCode::GridMismatch, std::string(what) + ": grid mismatch (n=" +
                                                 std::to_string(a.n()) + " vs n=" +
                                                 std::to_string(b.n()) + ")");
}

RealField::RealField(Grid grid, std::vector<double> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size())
        throw Error(ErrorCode::Domain, "sample count " + std::to_string(samples_.size()) +
                                           " does not match n^3 = " + std::to_string(grid_.size()));
}

double RealField::mean() const {
    double s = 0.0;
    for (double x : samples_) s += x;
    return s / static_cast<double>(samples_.size());
}

double RealField::min() const { return *std::min_element(samples_.begin(), samples_.end()); }

double RealField::max_abs() const {
    double m = 0.0;
    for (double x : samples_) m = std::max(m, std::abs(x));
    return m;
}

RealField& RealField::operator+=(const RealField& o) {
    require_same_grid(grid_, o.grid_, "RealField +=");
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += o.samples_[i];
    return *this;
}

RealField& RealField::operator-=(const RealField& o) {
    require_same_grid(grid_, o.grid_, "RealField -=");
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= o.samples_[i];
    return *this;
}

RealField& RealField::operator*=(double s) {
    for (double& x : samples_) x *= s;
    return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(RealField a, double s) { return a *= s; }

RealField multiply(const RealField& a, const RealField& b) {
    require_same_grid(a.grid(), b.grid(), "multiply");
    RealField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

SpectralField::SpectralField(Grid grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.spectral_size())
        throw Error(ErrorCode::Domain, "coefficient count does not match the grid's half layout");
}

Complex SpectralField::at(int kx, int ky, int kz) const {
    const int n = grid_.n();
    if (kx < 0) return std::conj(coeffs_[grid_.index_of(-kx, (n - ky) % n, (n - kz) % n)]);
    return coeffs_[grid_.index_of(kx, ky, kz)];
}

void SpectralField::set(int kx, int ky, int kz, Complex value) {
    if (kx < 0) {
        kx = -kx;
        ky = -ky;
        kz = -kz;
        value = std::conj(value);
    }
    const std::size_t m = grid_.index_of(kx, ky, kz);
    coeffs_[m] = value;
    if (kx == 0 || kx == grid_.n() / 2) coeffs_[grid_.partner(m)] = std::conj(value);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField +=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField -=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(SpectralField a, double s) { return a *= s; }

}  // namespace ehd
