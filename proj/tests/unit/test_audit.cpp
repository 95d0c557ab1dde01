#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ehd/audit.hpp"
#include "ehd/config.hpp"
#include "helpers.hpp"

using namespace ehd;

namespace {

constexpr double pi = std::numbers::pi;
const double vol = Grid::volume();

RealField constant(const Grid& g, double c) {
    RealField f(g);
    for (auto& x : f.samples()) x = c;
    return f;
}

/// Independent evaluation: nodes visited by coordinates, long double sum.
double brute_positivity(const State& s) {
    const int n = s.grid().n();
    long double sum = 0.0L;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t idx = i + static_cast<std::size_t>(n) * (j + static_cast<std::size_t>(n) * k);
                const long double v = s.v[idx], w = s.w[idx];
                sum += (v + w) * (v - w) * (v - w);
            }
    const long double h = 2.0L * std::numbers::pi_v<long double> / n;
    return static_cast<double>(sum * h * h * h);
}

}  // namespace

TEST_CASE("positivity term") {
    const Grid g(16);
    State s = State::zeros(g);
    s.v = constant(g, 2.0);
    CHECK(positivity_term(s) == doctest::Approx(8.0 * vol).epsilon(1e-14));

    // zeta = 2, eta = 2a sin x1: int 2 (2a sin x1)^2 = 4 a^2 (2pi)^3.
    const double a = 0.3;
    s.v = RealField::sample(g, [&](double x, double, double) { return 1.0 + a * std::sin(x); });
    s.w = RealField::sample(g, [&](double x, double, double) { return 1.0 - a * std::sin(x); });
    CHECK(positivity_term(s) == doctest::Approx(4.0 * a * a * vol).epsilon(1e-13));

    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const RealField p = test::random_field(g, 900 + t);
        const RealField q = test::random_field(g, 1900 + t);
        for (std::size_t i = 0; i < g.size(); ++i) {
            s.v[i] = std::abs(p[i]);
            s.w[i] = q[i] * q[i];
        }
        const double exact = brute_positivity(s);
        worst = std::max(worst, std::abs(positivity_term(s) - exact) / std::max(std::abs(exact), 1e-300));
        CHECK(positivity_term(s) >= -1e-10);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("drift term") {
    const Grid g(16);
    State s = State::zeros(g);
    s.v = RealField::sample(g, [](double x, double, double) { return 1.0 + 0.5 * std::sin(x); });
    s.w = RealField::sample(g, [](double x, double, double) { return 1.0 - 0.5 * std::sin(x); });
    // eta = sin x1, psi = -sin x1, zeta = 2: int 2 cos^2 x1 = (2pi)^3.
    CHECK(drift_term(s) == doctest::Approx(vol).epsilon(1e-13));
}

TEST_CASE("Y and the log-Sobolev ratio") {
    const Grid g(32);
    State tg = State::zeros(g);
    tg.u = taylor_green(g);
    CHECK(y_growth(tg) == doctest::Approx(std::numbers::e + 108 * pi * pi * pi).epsilon(1e-13));

    State sh = State::zeros(g);
    sh.u[0] = RealField::sample(g, [](double, double y, double) { return std::sin(y); });
    const double expected = 1.0 / (1.0 + std::sqrt(4 * pi * pi * pi) +
                                   std::log(std::numbers::e + std::sqrt(32 * pi * pi * pi)));
    CHECK(log_sobolev_ratio(sh) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(log_sobolev_ratio(sh) == doctest::Approx(0.0638).epsilon(1e-3));
    CHECK(log_sobolev_ratio(State::zeros(g)) == 0.0);
}

TEST_CASE("Gagliardo-Nirenberg ratios") {
    const Grid g(16);
    CHECK_FALSE(gn_ratios(constant(g, 3.0)).has_value());
    CHECK_FALSE(gn_ratios(RealField(g)).has_value());
    for (int t = 0; t < 20; ++t) {
        RealField f = test::random_field(g, 40 + t);
        for (auto& x : f.samples()) x += 0.5;
        const auto r = gn_ratios(f);
        REQUIRE(r.has_value());
        CHECK(std::isfinite(r->first));
        CHECK(std::isfinite(r->second));
        const auto scaled = gn_ratios(f * 7.3);
        CHECK(std::abs(scaled->first - r->first) <= 1e-12 * r->first);
        CHECK(std::abs(scaled->second - r->second) <= 1e-12 * r->second);
    }
}

TEST_CASE("energy budget of known states") {
    const Grid g(16);
    State s = State::zeros(g);
    s.u = taylor_green(g);
    const EnergyBudget b = energy_budget(s);
    CHECK(b.velocity_energy == doctest::Approx(4 * pi * pi * pi).epsilon(1e-13));
    CHECK(b.velocity_dissipation == doctest::Approx(8 * pi * pi * pi).epsilon(1e-13));
    CHECK(b.charge_energy == 0.0);
    CHECK(b.drift == 0.0);

    const AuditLedger l = make_ledger(s);
    CHECK(l.e0_vel == b.velocity_energy);
    CHECK(check_charge_identity(l, s).residual == 0.0);
    CHECK(check_velocity_decay(l, s) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ledger quadrature is third order") {
    // f(t) = e^{-t} sampled on nonuniform steps; d accumulates 2 int f.
    auto budget = [](double t) {
        EnergyBudget b{};
        b.velocity_dissipation = std::exp(-t);
        return b;
    };
    auto error = [&](double h) {
        AuditLedger l;
        l.last = budget(0.0);
        double t = 0.0;
        accumulate(l, budget(0.5 * h), budget(h), h);
        t = h;
        int i = 0;
        while (t < 1.0 - 1e-12) {
            const double dt = std::min((i++ % 2 ? 1.0 : 0.5) * h, 1.0 - t);
            t += dt;
            accumulate(l, budget(t), dt);
        }
        return std::abs(l.d_vel - 2.0 * (1.0 - std::exp(-1.0)));
    };
    const double e1 = error(0.02), e2 = error(0.01);
    CHECK(e1 < 1e-6);
    CHECK(e1 / e2 > 6.0);
}

TEST_CASE("audit monitor over a charged run") {
    const Grid g(16);
    std::ostringstream csv;
    AuditMonitor audit(&csv);
    StepObserver* obs[] = {&audit};
    const RunReport r = run(charged_shear(g), {.dt = 0.01, .cfl = 0.4, .t_end = 0.1, .dt_min = 1e-8}, obs);
    REQUIRE(r.status == RunStatus::Completed);
    const auto& s = audit.summary();
    CHECK(s.rows == r.steps + 1);
    CHECK(s.max_charge_residual <= 1e-5);
    CHECK(s.min_velocity_margin >= -1e-6);
    CHECK(s.max_drift_mismatch <= 1e-5);
    CHECK_FALSE(s.negativity_flag);
    CHECK(s.min_charge == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(audit.ledger().d_drift > 0.0);
    CHECK(audit.ledger().y_series.size() == static_cast<std::size_t>(s.rows));

    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == AuditMonitor::csv_header());
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == s.rows);
}

TEST_CASE("velocity margin stays above tolerance on Taylor-Green") {
    const Grid g(32);
    State s = State::zeros(g);
    s.u = taylor_green(g);
    AuditMonitor audit;
    StepObserver* obs[] = {&audit};
    run(s, {.dt = 0.01, .cfl = 0.4, .t_end = 0.2, .dt_min = 1e-8}, obs);
    CHECK(audit.summary().min_velocity_margin >= -1e-6);
    CHECK(audit.summary().max_drift_mismatch <= 1e-5);
}
