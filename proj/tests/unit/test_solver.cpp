#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ehd/checkpoint.hpp"
#include "ehd/config.hpp"
#include "ehd/error.hpp"
#include "ehd/solver.hpp"
#include "helpers.hpp"

using namespace ehd;
using ehd::test::max_diff;
using ehd::test::random_field;

namespace {

constexpr double pi = std::numbers::pi;

double energy(const VectorField& u) { return l2_squared(forward_transform(u)); }

double vmax(const VectorField& u) { return std::max({u[0].max_abs(), u[1].max_abs(), u[2].max_abs()}); }

/// Neutral, nonnegative random charges and a solenoidal velocity.
State random_state(const Grid& g, std::uint64_t seed) {
    State s = State::zeros(g);
    s.u = backward_transform(random_solenoidal_field(g, seed, 0.5, 2.0));
    const RealField a = random_field(g, seed + 1000, 4.0);
    const RealField b = random_field(g, seed + 2000, 4.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        s.v[i] = 1.0 + 0.3 * a[i] / a.max_abs();
        s.w[i] = 1.0 + 0.3 * b[i] / b.max_abs();
    }
    return s;
}

struct Recorder : StepObserver {
    int starts = 0;
    std::vector<double> times, dts;
    void start(const State&, const DerivedFields&) override { ++starts; }
    void observe(const State& s, const DerivedFields&, double dt) override {
        times.push_back(s.t);
        dts.push_back(dt);
    }
};

struct Thrower : StepObserver {
    bool blow_up;
    explicit Thrower(bool b) : blow_up(b) {}
    void start(const State&, const DerivedFields&) override {}
    void observe(const State&, const DerivedFields&, double) override {
        if (blow_up) throw BlowUpSuspected("observer alarm");
        throw std::runtime_error("writer failed");
    }
};

}  // namespace

TEST_CASE("momentum right-hand side") {
    const Grid g(32);
    State s = State::zeros(g);
    for (auto& x : s.v.samples()) x = 0.7;
    for (auto& x : s.w.samples()) x = 0.7;
    CHECK(vmax(momentum_rhs(s)) == 0.0);

    State tg = State::zeros(g);
    tg.u = taylor_green(g);
    CHECK(vmax(momentum_rhs(tg)) <= 1e-10);

    State e = State::zeros(g);
    e.v = RealField::sample(g, [](double x, double, double) { return 1.0 + std::sin(x); });
    for (auto& x : e.w.samples()) x = 1.0;
    CHECK(vmax(momentum_rhs(e)) <= 1e-10);

    // Divergence-free for generic states.
    const auto rhs = momentum_rhs(random_state(g, 3));
    CHECK(backward_transform(divergence(forward_transform(rhs))).max_abs() <= 1e-10);
}

TEST_CASE("charge right-hand side") {
    const Grid g(32);
    State s = State::zeros(g);
    for (auto& x : s.v.samples()) x = 2.0;
    for (auto& x : s.w.samples()) x = 2.0;
    auto [a, b] = charge_rhs(s);
    CHECK(a.max_abs() == 0.0);
    CHECK(b.max_abs() == 0.0);

    State h = State::zeros(g);
    h.v = RealField::sample(g, [](double x, double, double) { return 1.0 + 0.5 * std::sin(x); });
    for (auto& x : h.w.samples()) x = 1.0;
    auto [hv, hw] = charge_rhs(h);
    CHECK(std::abs(hv.mean()) <= 1e-12);
    CHECK(std::abs(hw.mean()) <= 1e-12);

    const Grid small(16);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        auto [rv, rw] = charge_rhs(random_state(small, 50 + t));
        worst = std::max({worst, std::abs(rv.mean()), std::abs(rw.mean())});
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("Taylor-Green is reproduced") {
    const Grid g(32);
    State s = State::zeros(g);
    s.u = taylor_green(g);
    CHECK(energy(s.u) == doctest::Approx(4 * pi * pi * pi).epsilon(1e-14));
    const State one = advance(s, 1e-3);
    CHECK(one.t == 1e-3);
    CHECK(max_diff(one.u, taylor_green(g, 1e-3)) <= 1e-9);

    StepControl c{.dt = 1e-2, .cfl = 0.4, .t_end = 0.5, .dt_min = 1e-8};
    const RunReport r = run(s, c, {});
    CHECK(r.status == RunStatus::Completed);
    CHECK(r.t_final == 0.5);
    CHECK(r.steps == 50);
    CHECK(energy(r.final_state.u) == doctest::Approx(4 * pi * pi * pi * std::exp(-2.0)).epsilon(1e-6));
    CHECK(max_diff(r.final_state.u, taylor_green(g, 0.5)) <= 1e-8);
}

TEST_CASE("zero data stays zero") {
    const Grid g(16);
    const State s = advance(State::zeros(g), 0.1);
    CHECK(vmax(s.u) == 0.0);
    CHECK(s.v.max_abs() == 0.0);
    CHECK(s.w.max_abs() == 0.0);
}

TEST_CASE("run bookkeeping") {
    const Grid g(16);
    Recorder rec;
    StepObserver* obs[] = {&rec};

    const RunReport none = run(State::zeros(g), {.dt = 0.1, .cfl = 0.4, .t_end = 0.0, .dt_min = 1e-8}, obs);
    CHECK(none.status == RunStatus::Completed);
    CHECK(none.steps == 0);
    CHECK(rec.starts == 1);

    State s = random_state(g, 7);
    const RunReport r = run(s, {.dt = 0.03, .cfl = 0.4, .t_end = 0.1, .dt_min = 1e-8}, obs);
    CHECK(r.status == RunStatus::Completed);
    CHECK(rec.times.size() == static_cast<std::size_t>(r.steps));
    CHECK(rec.times.back() == 0.1);
    double total = 0.0;
    for (double dt : rec.dts) total += dt;
    CHECK(total == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(r.max_divergence <= kDivergenceTolerance);
    CHECK(r.checksum == state_checksum(r.final_state));
    CHECK(r.wall_seconds >= 0.0);

    // Charge means are conserved.
    CHECK(r.final_state.v.mean() == doctest::Approx(s.v.mean()).epsilon(1e-12));
    CHECK(r.final_state.w.mean() == doctest::Approx(s.w.mean()).epsilon(1e-12));
}

TEST_CASE("time step selection") {
    const Grid g(16);
    State s = State::zeros(g);
    s.u = taylor_green(g);
    const StepControl c{.dt = 1.0, .cfl = 0.5, .t_end = 10.0, .dt_min = 1e-8};
    CHECK(cfl_limit(s, 0.5) == doctest::Approx(0.5 * g.dx()));
    CHECK(choose_dt(s, c) == doctest::Approx(0.5 * g.dx()));
    CHECK(cfl_limit(State::zeros(g), 0.5) == kInf);

    State near_end = s;
    near_end.t = 10.0 - 1e-12;
    CHECK(choose_dt(near_end, c) == doctest::Approx(1e-12));

    State fast = s;
    fast.u *= 1e9;
    CHECK_THROWS_AS(choose_dt(fast, c), BlowUpSuspected);

    CHECK_THROWS_AS((StepControl{.dt = 1e-3, .cfl = 0.4, .t_end = 1, .dt_min = 1e-2}.validate()), Error);
    CHECK_THROWS_AS((StepControl{.dt = 1e-3, .cfl = 1.5, .t_end = 1, .dt_min = 1e-6}.validate()), Error);
}

TEST_CASE("termination statuses") {
    const Grid g(16);
    const StepControl c{.dt = 1e-2, .cfl = 0.4, .t_end = 0.05, .dt_min = 1e-6};

    State nan = State::zeros(g);
    nan.v[3] = std::nan("");
    CHECK(run(nan, c, {}).status == RunStatus::BlowUpSuspected);

    State fast = State::zeros(g);
    for (auto& x : fast.u[0].samples()) x = 1e9;
    const RunReport collapse = run(fast, c, {});
    CHECK(collapse.status == RunStatus::BlowUpSuspected);
    CHECK(collapse.steps == 0);

    State compressible = State::zeros(g);
    compressible.u[0] = RealField::sample(g, [](double x, double, double) { return std::sin(x); });
    const RunReport inv = run(compressible, c, {});
    CHECK(inv.status == RunStatus::InvariantViolation);
    CHECK(inv.message.find("divergence") != std::string::npos);

    Thrower alarm(true);
    StepObserver* a[] = {&alarm};
    const RunReport blown = run(random_state(g, 1), c, a);
    CHECK(blown.status == RunStatus::BlowUpSuspected);
    CHECK(blown.message == "observer alarm");
    CHECK(blown.steps == 1);

    Thrower broken(false);
    StepObserver* b[] = {&broken};
    CHECK_THROWS_WITH(run(random_state(g, 1), c, b), "writer failed");
}

TEST_CASE("charged preset stays nonnegative") {
    const Grid g(32);
    const RunReport r = run(charged_shear(g), {.dt = 1e-2, .cfl = 0.4, .t_end = 0.25, .dt_min = 1e-8}, {});
    CHECK(r.status == RunStatus::Completed);
    CHECK(std::min(r.final_state.v.min(), r.final_state.w.min()) >= -1e-8);
    CHECK(r.max_divergence <= 1e-9);
}
