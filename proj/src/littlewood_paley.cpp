#include "ehd/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ehd/error.hpp"
#include "ehd/random.hpp"
#include "ehd/spectral.hpp"

namespace ehd {

namespace {

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

/// 0 for t <= 0, 1 for t >= 1, smooth in between.
double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = bump(t);
    return a / (a + bump(1.0 - t));
}

}  // namespace

double cutoff(double r) {
    constexpr double inner = 5.0 / 4.0, outer = 3.0 / 2.0;
    return smooth_step((outer - r) / (outer - inner));
}

double annulus(double r) { return cutoff(r) - cutoff(2.0 * r); }

double band_weight(int j, double r) { return annulus(std::ldexp(r, -j)); }

BandRange band_range(const Grid& g) {
    // Smallest nonzero |k| is 1; largest retained is sqrt(3) * kmax (cube corner).
    const double kmin = 1.0;
    const double kmax = std::sqrt(3.0) * g.kmax();
    int j_min = 0;
    while (kAnnulusOuter * std::ldexp(1.0, j_min) > kmin) --j_min;
    ++j_min;
    int j_max = j_min;
    while (kAnnulusInner * std::ldexp(1.0, j_max + 1) < kmax) ++j_max;
    return {j_min, j_max};
}

bool band_representable(const Grid& g, int j) {
    const auto range = band_range(g);
    return j >= range.j_min && kAnnulusOuter * std::ldexp(1.0, j) <= g.kmax();
}

SpectralField band(const SpectralField& f, int j) {
    const Grid& g = f.grid();
    SpectralField out(g);
    const auto in = f.coeffs();
    auto o = out.coeffs();
    for (std::size_t m = 1; m < in.size(); ++m) {
        if (in[m] == Complex{}) continue;
        const double w = band_weight(j, std::sqrt(g.k2(m)));
        if (w != 0.0) o[m] = w * in[m];
    }
    return out;
}

std::vector<DyadicBand> decompose(const SpectralField& f) {
    const auto range = band_range(f.grid());
    std::vector<DyadicBand> bands;
    bands.reserve(range.j_max - range.j_min + 1);
    for (int j = range.j_min; j <= range.j_max; ++j) bands.push_back({j, band(f, j)});
    return bands;
}

void BesovParams::validate() const {
    if (!(p >= 1.0) || !(r >= 1.0)) {
        std::ostringstream msg;
        msg << "Besov exponents must satisfy 1 <= p, r <= inf (p=" << p << ", r=" << r << ")";
        throw Error(ErrorCode::Domain, msg.str());
    }
    if (!std::isfinite(s)) throw Error(ErrorCode::Domain, "Besov regularity index must be finite");
}

double besov_norm(const SpectralField& f, const BesovParams& params) {
    params.validate();
    double acc = 0.0;
    for (const auto& b : decompose(f)) {
        const double term =
            std::pow(2.0, b.j * params.s) * lp_norm(backward_transform(b.field), params.p);
        if (std::isinf(params.r))
            acc = std::max(acc, term);
        else
            acc += std::pow(term, params.r);
    }
    return std::isinf(params.r) ? acc : std::pow(acc, 1.0 / params.r);
}

namespace {

/// All derivatives d^a f with |a| = k.
std::vector<RealField> derivatives_of_order(const SpectralField& f, int k) {
    std::vector<RealField> out;
    for (int a = 0; a <= k; ++a)
        for (int b = 0; a + b <= k; ++b) {
            const int c = k - a - b;
            SpectralField d = f;
            for (int i = 0; i < a; ++i) d = derivative(d, 0);
            for (int i = 0; i < b; ++i) d = derivative(d, 1);
            for (int i = 0; i < c; ++i) d = derivative(d, 2);
            out.push_back(backward_transform(d));
        }
    return out;
}

double inverse(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

BernsteinRatios bernstein_ratios(const SpectralField& f, int j, int k, double p, double q) {
    const RealField samples = backward_transform(f);
    const double fp = lp_norm(samples, p);
    if (fp == 0.0) return {0.0, 0.0};
    double sup_q = 0.0, sup_p = 0.0;
    for (const auto& d : derivatives_of_order(f, k)) {
        sup_q = std::max(sup_q, lp_norm(d, q));
        sup_p = std::max(sup_p, lp_norm(d, p));
    }
    const double upper_scale = std::pow(2.0, j * k + 3.0 * j * (inverse(p) - inverse(q)));
    const double lower_scale = std::pow(2.0, j * k);
    return {sup_q / (upper_scale * fp), sup_p / (lower_scale * fp)};
}

BernsteinReport bernstein_check(const Grid& g, int j, int k, double p, double q, int trials,
                                std::uint64_t seed) {
    if (!(p >= 1.0 && q >= p))
        throw Error(ErrorCode::Domain, "Bernstein check requires 1 <= p <= q <= inf");
    if (k < 0 || trials < 1) throw Error(ErrorCode::Domain, "Bernstein check needs k >= 0 and trials >= 1");
    if (!band_representable(g, j)) {
        std::ostringstream msg;
        msg << "band j=" << j << " (annulus up to |k|=" << kAnnulusOuter * std::ldexp(1.0, j)
            << ") is not representable on n=" << g.n() << " (retained |k_i| <= " << g.kmax() << ")";
        throw Error(ErrorCode::Domain, msg.str());
    }

    BernsteinReport rep{j, k, p, q, trials};
    rep.upper_min = rep.two_sided_min = std::numeric_limits<double>::infinity();
    CounterRng rng(seed, static_cast<std::uint64_t>(j + 1024));
    for (int trial = 0; trial < trials; ++trial) {
        const double x0[3] = {2.0 * std::numbers::pi * rng.next_uniform(),
                              2.0 * std::numbers::pi * rng.next_uniform(),
                              2.0 * std::numbers::pi * rng.next_uniform()};
        SpectralField f(g);
        auto c = f.coeffs();
        for (std::size_t m = 1; m < c.size(); ++m) {
            const double re = rng.next_normal();
            const double im = rng.next_normal();
            const double w = band_weight(j, std::sqrt(g.k2(m)));
            if (w == 0.0) continue;
            const auto km = g.mode(m);
            const double phase = -(km.kx * x0[0] + km.ky * x0[1] + km.kz * x0[2]);
            c[m] = w * std::polar(1.0, phase) * (Complex(1.0, 0.0) + 0.25 * Complex(re, im));
        }
        hermitian_symmetrize(f);
        const auto r = bernstein_ratios(f, j, k, p, q);
        rep.upper_min = std::min(rep.upper_min, r.upper);
        rep.upper_max = std::max(rep.upper_max, r.upper);
        rep.two_sided_min = std::min(rep.two_sided_min, r.two_sided);
        rep.two_sided_max = std::max(rep.two_sided_max, r.two_sided);
    }
    return rep;
}

}  // namespace ehd
