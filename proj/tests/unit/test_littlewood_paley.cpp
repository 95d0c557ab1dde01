#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "ehd/error.hpp"
#include "ehd/littlewood_paley.hpp"
#include "helpers.hpp"

using namespace ehd;
using ehd::test::max_abs;
using ehd::test::max_diff;
using ehd::test::random_field;

namespace {

RealField cos4(const Grid& g) {
    return RealField::sample(g, [](double x, double, double) { return std::cos(4 * x); });
}

/// Random field whose modes all sit on band plateaus 2^j [3/4, 5/4].
SpectralField plateau_field(const Grid& g, std::uint64_t seed) {
    CounterRng rng(seed, 5);
    SpectralField F = random_spectral_field(g, rng, g.kmax());
    for (std::size_t m = 0; m < F.size(); ++m) {
        const double k = std::sqrt(g.k2(m));
        bool on_plateau = false;
        for (int j = 0; j < 8; ++j) {
            const double r = k / std::ldexp(1.0, j);
            on_plateau = on_plateau || (r >= 0.75 && r <= 1.25);
        }
        if (!on_plateau) F[m] = 0.0;
    }
    return F;
}

}  // namespace

TEST_CASE("cutoff profile") {
    for (double r : {0.0, 0.5, 1.0, 1.25}) CHECK(cutoff(r) == 1.0);
    for (double r : {1.5, 2.0, 10.0}) CHECK(cutoff(r) == 0.0);
    double prev = 1.0;
    for (double r = 1.25; r <= 1.5; r += 1e-3) {
        const double c = cutoff(r);
        CHECK(c <= prev);
        CHECK(c >= 0.0);
        prev = c;
    }
    CHECK(cutoff(1.375) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(annulus(0.6) == 0.0);
    CHECK(annulus(1.6) == 0.0);
    CHECK(annulus(1.0) == 1.0);
}

TEST_CASE("partition of unity") {
    double worst = 0.0;
    for (double xi = 1e-3; xi < 1e4; xi *= 1.0137) {
        double sum = 0.0;
        for (int j = -20; j <= 20; ++j) sum += band_weight(j, xi);
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    CHECK(worst <= 1e-12);

    for (int n : {8, 16, 32, 64}) {
        const Grid g(n);
        const auto br = band_range(g);
        double w = 0.0;
        for (std::size_t m = 1; m < g.spectral_size(); ++m) {
            if (!g.retained(m)) continue;
            double sum = 0.0;
            for (int j = br.j_min; j <= br.j_max; ++j) sum += band_weight(j, std::sqrt(g.k2(m)));
            w = std::max(w, std::abs(sum - 1.0));
        }
        CHECK(w <= 1e-12);
    }
}

TEST_CASE("band range") {
    CHECK(band_range(Grid(16)).j_min == 0);
    CHECK(band_range(Grid(16)).j_max == 3);
    CHECK(band_range(Grid(8)).j_max == 2);
    for (int n : {8, 16, 32, 64, 128}) {
        const auto br = band_range(Grid(n));
        CHECK(br.j_min <= br.j_max);
    }
    CHECK(band_representable(Grid(64), 3));
    CHECK_FALSE(band_representable(Grid(32), 3));
}

TEST_CASE("decompose") {
    const Grid g(32);
    const auto bands = decompose(forward_transform(cos4(g)));
    for (const auto& b : bands) {
        const RealField f = backward_transform(b.field);
        CHECK(band_weight(b.j, 4.0) == (b.j == 2 ? 1.0 : 0.0));
        if (b.j == 2) CHECK(max_diff(f, cos4(g)) < 1e-14);
        else CHECK(f.max_abs() < 1e-14);
    }

    RealField c(g);
    for (auto& x : c.samples()) x = 2.5;
    for (const auto& b : decompose(forward_transform(c))) CHECK(max_abs(b.field) == 0.0);

    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        RealField f = random_field(g, 500 + t, g.kmax());
        for (auto& x : f.samples()) x += 0.75;
        const SpectralField F = forward_transform(f);
        SpectralField sum(g);
        for (const auto& b : decompose(F)) sum += b.field;
        RealField expect = f;
        const double mean = F.mean().real();
        for (auto& x : expect.samples()) x -= mean;
        worst = std::max(worst, max_diff(backward_transform(sum), expect));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("non-adjacent bands have disjoint support") {
    const Grid g(64);
    const SpectralField F = forward_transform(random_field(g, 42, g.kmax()));
    const auto bands = decompose(F);
    for (std::size_t a = 0; a < bands.size(); ++a)
        for (std::size_t b = a + 2; b < bands.size(); ++b)
            for (std::size_t m = 0; m < F.size(); ++m)
                if (std::abs(bands[a].field[m]) != 0.0 && std::abs(bands[b].field[m]) != 0.0) {
                    FAIL("bands " << bands[a].j << " and " << bands[b].j << " overlap");
                }
}

TEST_CASE("Besov norm") {
    const Grid g(32);
    const SpectralField F = forward_transform(cos4(g));
    CHECK(besov_norm(F, {0.0, kInf, kInf}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(besov_norm(F, {1.0, kInf, kInf}) == doctest::Approx(4.0).epsilon(1e-14));
    for (const BesovParams p : {BesovParams{0, 2, 2}, BesovParams{1.5, 1, kInf}, BesovParams{-1, kInf, 3}})
        CHECK(besov_norm(SpectralField(g), p) == 0.0);

    for (int t = 0; t < 10; ++t) {
        const SpectralField R = forward_transform(random_field(g, 700 + t, g.kmax()));
        for (double p : {1.0, 2.0, 4.0, kInf}) {
            const double inf_r = besov_norm(R, {0.5, p, kInf});
            CHECK(inf_r <= besov_norm(R, {0.5, p, 3.0}) * (1 + 1e-14));
            CHECK(besov_norm(R, {0.5, p, 3.0}) <= besov_norm(R, {0.5, p, 1.0}) * (1 + 1e-14));
        }
    }

    for (int t = 0; t < 10; ++t) {
        const SpectralField P = plateau_field(g, 800 + t);
        CHECK(besov_norm(P, {0.0, 2.0, 2.0}) == doctest::Approx(std::sqrt(l2_squared(P))).epsilon(1e-10));
    }

    CHECK_THROWS_AS(besov_norm(F, {0.0, 0.5, 2.0}), Error);
    CHECK_THROWS_AS(besov_norm(F, {0.0, 2.0, 0.0}), Error);
}

TEST_CASE("Bernstein ratios") {
    const Grid g(32);
    const SpectralField F = forward_transform(cos4(g));
    const auto r = bernstein_ratios(F, 2, 1, 2.0, 2.0);
    CHECK(r.upper == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.two_sided == doctest::Approx(1.0).epsilon(1e-13));

    const auto k0 = bernstein_check(g, 2, 0, 3.0, 3.0, 10, 1);
    CHECK(k0.upper_min == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(k0.upper_max == doctest::Approx(1.0).epsilon(1e-13));

    const auto rep = bernstein_check(g, 2, 1, 2.0, kInf, 20, 9);
    CHECK(rep.trials == 20);
    CHECK(rep.upper_min > 0.0);
    CHECK(rep.upper_min <= rep.upper_max);
    // Lower half of the two-sided estimate: on the band annulus |k| >= 5/8 2^j, so
    // max_i ||d_i f||_2 >= ||grad f||_2 / sqrt(3) >= 5 / (8 sqrt 3) 2^j ||f||_2.
    const auto two = bernstein_check(g, 2, 1, 2.0, 2.0, 20, 11);
    CHECK(two.two_sided_min >= 5.0 / (8.0 * std::sqrt(3.0)));
    CHECK(two.two_sided_max <= 1.5);

    CHECK_THROWS_AS(bernstein_check(g, 3, 1, 2.0, kInf, 5, 1), Error);
    CHECK_THROWS_AS(bernstein_check(g, 2, 1, 4.0, 2.0, 5, 1), Error);
}
