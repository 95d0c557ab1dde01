#include "ehd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehd/error.hpp"
#include "fft_plans.hpp"

namespace ehd {

namespace {

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

/// Wavenumber of mode m along an axis, with the unmatched Nyquist row mapped to 0.
double axis_wavenumber(const Grid& g, std::size_t m, int axis) {
    const auto k = g.mode(m);
    const int v = axis == 0 ? k.kx : axis == 1 ? k.ky : k.kz;
    return std::abs(v) == g.n() / 2 ? 0.0 : double(v);
}

}  // namespace

SpectralField forward_transform(const RealField& f) {
    const Grid& g = f.grid();
    const auto s = f.samples();
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        if (!std::isfinite(s[idx])) {
            const std::size_t n = g.n();
            std::ostringstream msg;
            msg << "non-finite sample " << s[idx] << " at node (" << idx % n << ", "
                << (idx / n) % n << ", " << idx / (n * n) << ")";
            throw Error(ErrorCode::NonFinite, msg.str());
        }
    }
    SpectralField out(g);
    // r2c leaves its input untouched by default.
    fftw_execute_dft_r2c(g.plans().r2c, const_cast<double*>(s.data()),
                         as_fftw(out.coeffs().data()));
    const double scale = 1.0 / static_cast<double>(g.size());
    auto c = out.coeffs();
    for (std::size_t m = 0; m < c.size(); ++m) c[m] = g.retained(m) ? c[m] * scale : Complex{};
    return out;
}

RealField backward_transform(const SpectralField& F) {
    const Grid& g = F.grid();
    double cmax = 0.0;
    for (const auto& c : F.coeffs()) cmax = std::max(cmax, std::abs(c));
    const double defect = hermitian_defect(F);
    if (defect > 1e-11 * cmax) {
        std::ostringstream msg;
        msg << "coefficients are not Hermitian-symmetric (defect " << defect << ", scale " << cmax
            << ")";
        throw Error(ErrorCode::Hermitian, msg.str());
    }
    // c2r destroys its input.
    std::vector<Complex> scratch(F.coeffs().begin(), F.coeffs().end());
    RealField out(g);
    fftw_execute_dft_c2r(g.plans().c2r, as_fftw(scratch.data()), out.samples().data());
    return out;
}

SpectralVectorField forward_transform(const VectorField& u) {
    require_same_grid(u[0].grid(), u[1].grid(), "forward_transform");
    require_same_grid(u[0].grid(), u[2].grid(), "forward_transform");
    return {{forward_transform(u[0]), forward_transform(u[1]), forward_transform(u[2])}};
}

VectorField backward_transform(const SpectralVectorField& U) {
    require_same_grid(U[0].grid(), U[1].grid(), "backward_transform");
    require_same_grid(U[0].grid(), U[2].grid(), "backward_transform");
    return {{backward_transform(U[0]), backward_transform(U[1]), backward_transform(U[2])}};
}

void dealias(SpectralField& F) {
    const Grid& g = F.grid();
    auto c = F.coeffs();
    for (std::size_t m = 0; m < c.size(); ++m)
        if (!g.retained(m)) c[m] = Complex{};
}

void hermitian_symmetrize(SpectralField& F) {
    const Grid& g = F.grid();
    const int n = g.n();
    auto c = F.coeffs();
    for (int a : {0, n / 2}) {
        for (int cz = 0; cz < n; ++cz)
            for (int b = 0; b < n; ++b) {
                const std::size_t m = g.spectral_index(a, b, cz);
                const std::size_t p = g.partner(m);
                if (p < m) continue;
                const Complex avg = 0.5 * (c[m] + std::conj(c[p]));
                c[m] = avg;
                c[p] = std::conj(avg);
            }
    }
}

double hermitian_defect(const SpectralField& F) {
    const Grid& g = F.grid();
    const int n = g.n();
    const auto c = F.coeffs();
    double d = 0.0;
    for (int a : {0, n / 2})
        for (int cz = 0; cz < n; ++cz)
            for (int b = 0; b < n; ++b) {
                const std::size_t m = g.spectral_index(a, b, cz);
                d = std::max(d, std::abs(c[m] - std::conj(c[g.partner(m)])));
            }
    return d;
}

SpectralField derivative(const SpectralField& F, int axis) {
    const Grid& g = F.grid();
    SpectralField out(g);
    const auto in = F.coeffs();
    auto o = out.coeffs();
    for (std::size_t m = 0; m < in.size(); ++m)
        o[m] = Complex(0.0, axis_wavenumber(g, m, axis)) * in[m];
    return out;
}

SpectralVectorField gradient(const SpectralField& F) {
    return {{derivative(F, 0), derivative(F, 1), derivative(F, 2)}};
}

SpectralField divergence(const SpectralVectorField& U) {
    require_same_grid(U[0].grid(), U[1].grid(), "divergence");
    require_same_grid(U[0].grid(), U[2].grid(), "divergence");
    const Grid& g = U.grid();
    SpectralField out(g);
    auto o = out.coeffs();
    for (std::size_t m = 0; m < o.size(); ++m) {
        Complex s{};
        for (int i = 0; i < 3; ++i) s += Complex(0.0, axis_wavenumber(g, m, i)) * U[i][m];
        o[m] = s;
    }
    return out;
}

SpectralField laplacian(const SpectralField& F) {
    const Grid& g = F.grid();
    SpectralField out(g);
    const auto in = F.coeffs();
    auto o = out.coeffs();
    for (std::size_t m = 0; m < in.size(); ++m) o[m] = -g.k2(m) * in[m];
    return out;
}

SpectralVectorField curl(const SpectralVectorField& U) {
    require_same_grid(U[0].grid(), U[1].grid(), "curl");
    require_same_grid(U[0].grid(), U[2].grid(), "curl");
    const Grid& g = U.grid();
    auto out = SpectralVectorField::zeros(g);
    const Complex I(0.0, 1.0);
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        const double k1 = axis_wavenumber(g, m, 0);
        const double k2 = axis_wavenumber(g, m, 1);
        const double k3 = axis_wavenumber(g, m, 2);
        out[0][m] = I * (k2 * U[2][m] - k3 * U[1][m]);
        out[1][m] = I * (k3 * U[0][m] - k1 * U[2][m]);
        out[2][m] = I * (k1 * U[1][m] - k2 * U[0][m]);
    }
    return out;
}

SpectralVectorField leray_project(const SpectralVectorField& U) {
    require_same_grid(U[0].grid(), U[1].grid(), "leray_project");
    require_same_grid(U[0].grid(), U[2].grid(), "leray_project");
    const Grid& g = U.grid();
    SpectralVectorField out = U;
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        const double k[3] = {axis_wavenumber(g, m, 0), axis_wavenumber(g, m, 1),
                             axis_wavenumber(g, m, 2)};
        const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (kk == 0.0) continue;
        const Complex kdotu = k[0] * U[0][m] + k[1] * U[1][m] + k[2] * U[2][m];
        for (int i = 0; i < 3; ++i) out[i][m] -= (k[i] / kk) * kdotu;
    }
    return out;
}

SpectralField solve_poisson(const SpectralField& eta) {
    const double net = std::abs(eta.mean());
    if (net > kNeutralityTolerance) {
        std::ostringstream msg;
        msg << "net charge mean(v - w) = " << eta.mean().real() << " exceeds neutrality tolerance "
            << kNeutralityTolerance;
        throw NeutralityError(msg.str(), eta.mean().real());
    }
    const Grid& g = eta.grid();
    SpectralField psi(g);
    const auto in = eta.coeffs();
    auto o = psi.coeffs();
    for (std::size_t m = 1; m < in.size(); ++m) o[m] = -in[m] / g.k2(m);
    return psi;
}

double lp_norm(const RealField& f, double p) {
    if (!(p >= 1.0))
        throw Error(ErrorCode::Domain, "L^p exponent must satisfy p >= 1 (got " + std::to_string(p) + ")");
    const auto s = f.samples();
    if (std::isinf(p)) return f.max_abs();
    double sum = 0.0;
    if (p == 2.0) {
        for (double x : s) sum += x * x;
        return std::sqrt(sum * f.grid().cell_volume());
    }
    if (p == 1.0) {
        for (double x : s) sum += std::abs(x);
        return sum * f.grid().cell_volume();
    }
    // Scale by the maximum to keep large p from overflowing.
    const double mx = f.max_abs();
    if (mx == 0.0) return 0.0;
    for (double x : s) sum += std::pow(std::abs(x) / mx, p);
    return mx * std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

namespace {
template <typename Weight>
double weighted_sum(const SpectralField& F, Weight&& wfn) {
    const Grid& g = F.grid();
    const auto c = F.coeffs();
    double sum = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        const double a2 = std::norm(c[m]);
        if (a2 == 0.0) continue;
        sum += g.weight(m) * wfn(g.k2(m)) * a2;
    }
    return sum * Grid::volume();
}
}  // namespace

double sobolev_norm(const SpectralField& F, double s) {
    if (!(s >= 0.0)) throw Error(ErrorCode::Domain, "Sobolev index must be >= 0");
    return std::sqrt(weighted_sum(F, [s](double k2) { return std::pow(1.0 + k2, s); }));
}

double homogeneous_sobolev_norm(const SpectralField& F, double s) {
    return std::sqrt(weighted_sum(F, [s](double k2) { return k2 == 0.0 ? 0.0 : std::pow(k2, s); }));
}

double l2_squared(const SpectralField& F) {
    return weighted_sum(F, [](double) { return 1.0; });
}

double l2_squared(const SpectralVectorField& U) {
    return l2_squared(U[0]) + l2_squared(U[1]) + l2_squared(U[2]);
}

double spectral_tail_fraction(const SpectralField& F) {
    const Grid& g = F.grid();
    const double cut = 2.0 * g.kmax() / 3.0;
    const auto c = F.coeffs();
    double total = 0.0, tail = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        const double e = g.weight(m) * std::norm(c[m]);
        total += e;
        const auto k = g.mode(m);
        if (std::max({std::abs(k.kx), std::abs(k.ky), std::abs(k.kz)}) > cut) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

RealField magnitude(std::span<const RealField* const> components) {
    if (components.empty()) throw Error(ErrorCode::Domain, "magnitude of an empty block");
    const Grid& g = components.front()->grid();
    for (const auto* f : components) require_same_grid(g, f->grid(), "magnitude");
    RealField out(g);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (const auto* f : components) s += (*f)[i] * (*f)[i];
        out[i] = std::sqrt(s);
    }
    return out;
}

RealField magnitude(const VectorField& u) {
    const RealField* comps[3] = {&u[0], &u[1], &u[2]};
    return magnitude(comps);
}

}  // namespace ehd
