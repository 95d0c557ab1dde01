#include "ehd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "ehd/checkpoint.hpp"
#include "ehd/error.hpp"
#include "ehd/spectral.hpp"

namespace ehd {

namespace {

struct SpectralState {
    SpectralVectorField u;
    SpectralField v;
    SpectralField w;

    SpectralState& operator+=(const SpectralState& o) {
        u += o.u;
        v += o.v;
        w += o.w;
        return *this;
    }
    SpectralState& operator*=(double s) {
        u *= s;
        v *= s;
        w *= s;
        return *this;
    }
};

SpectralState operator*(SpectralState a, double s) { return a *= s; }
SpectralState operator+(SpectralState a, const SpectralState& b) { return a += b; }

SpectralState to_spectral(const State& s) {
    return {forward_transform(s.u), forward_transform(s.v), forward_transform(s.w)};
}

/// Multiplies every mode by exp(-|k|^2 h) (h may be negative).
SpectralState diffuse(SpectralState y, double h) {
    const Grid& g = y.v.grid();
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        const double f = std::exp(-g.k2(m) * h);
        for (int i = 0; i < 3; ++i) y.u[i][m] *= f;
        y.v[m] *= f;
        y.w[m] *= f;
    }
    return y;
}

/// -i k_j FT(a_j) summed over j: spectral divergence of a physical flux, negated.
SpectralField minus_div(const RealField& fx, const RealField& fy, const RealField& fz) {
    SpectralVectorField flux{{forward_transform(fx), forward_transform(fy), forward_transform(fz)}};
    return divergence(flux) * -1.0;
}

SpectralState nonlinear(const SpectralState& y) {
    const Grid& g = y.v.grid();
    const VectorField u = backward_transform(y.u);
    const RealField v = backward_transform(y.v);
    const RealField w = backward_transform(y.w);
    const SpectralField psi_hat = solve_poisson(y.v - y.w);
    const VectorField gpsi = backward_transform(gradient(psi_hat));
    const RealField lap_psi = backward_transform(laplacian(psi_hat));

    const std::size_t N = g.size();
    SpectralState out{SpectralVectorField::zeros(g), SpectralField(g), SpectralField(g)};

    // Momentum: -div(u (x) u) + Lap(psi) grad(psi), then projected.
    RealField uu[3][3] = {{RealField(g), RealField(g), RealField(g)},
                          {RealField(g), RealField(g), RealField(g)},
                          {RealField(g), RealField(g), RealField(g)}};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            for (std::size_t x = 0; x < N; ++x) uu[i][j][x] = u[i][x] * u[j][x];
            if (j != i) uu[j][i] = uu[i][j];
        }
    for (int i = 0; i < 3; ++i) {
        RealField force(g);
        for (std::size_t x = 0; x < N; ++x) force[x] = lap_psi[x] * gpsi[i][x];
        out.u[i] = minus_div(uu[i][0], uu[i][1], uu[i][2]) + forward_transform(force);
    }
    out.u = leray_project(out.u);

    // Charges in divergence form: v drifts along -grad psi, w along +grad psi.
    RealField fv[3] = {RealField(g), RealField(g), RealField(g)};
    RealField fw[3] = {RealField(g), RealField(g), RealField(g)};
    for (int i = 0; i < 3; ++i)
        for (std::size_t x = 0; x < N; ++x) {
            fv[i][x] = v[x] * (u[i][x] + gpsi[i][x]);
            fw[i][x] = w[x] * (u[i][x] - gpsi[i][x]);
        }
    out.v = minus_div(fv[0], fv[1], fv[2]);
    out.w = minus_div(fw[0], fw[1], fw[2]);
    return out;
}

State to_physical(const SpectralState& y, double t, std::int64_t step_index) {
    return State{backward_transform(y.u), backward_transform(y.v), backward_transform(y.w), t,
                 step_index};
}

/// Integrating-factor Shu-Osher RK3.
SpectralState if_rk3(const SpectralState& y0, double dt) {
    const SpectralState y1 = diffuse(y0 + nonlinear(y0) * dt, dt);
    const SpectralState y2 =
        diffuse(y0, 0.5 * dt) * 0.75 + diffuse(y1 + nonlinear(y1) * dt, -0.5 * dt) * 0.25;
    return diffuse(y0, dt) * (1.0 / 3.0) + diffuse(y2 + nonlinear(y2) * dt, 0.5 * dt) * (2.0 / 3.0);
}

}  // namespace

State State::zeros(const Grid& g) {
    return State{VectorField::zeros(g), RealField(g), RealField(g), 0.0, 0};
}

void StepControl::validate() const {
    std::ostringstream msg;
    if (!(dt_min > 0.0) || !(dt_min <= dt))
        msg << "step control requires 0 < dt_min <= dt (dt_min=" << dt_min << ", dt=" << dt << "); ";
    if (!(cfl > 0.0 && cfl < 1.0)) msg << "CFL factor must satisfy 0 < cfl < 1 (got " << cfl << "); ";
    if (!std::isfinite(t_end)) msg << "t_end must be finite; ";
    if (!msg.str().empty()) throw Error(ErrorCode::Domain, msg.str());
}

DerivedFields derive(const State& s) {
    const SpectralField psi_hat = solve_poisson(forward_transform(s.v) - forward_transform(s.w));
    return DerivedFields{backward_transform(psi_hat), backward_transform(curl(forward_transform(s.u))),
                         s.v + s.w, s.v - s.w};
}

VectorField momentum_rhs(const State& s) { return backward_transform(nonlinear(to_spectral(s)).u); }

std::pair<RealField, RealField> charge_rhs(const State& s) {
    const SpectralState r = nonlinear(to_spectral(s));
    return {backward_transform(r.v), backward_transform(r.w)};
}

double cfl_limit(const State& s, double cfl) {
    const SpectralField psi_hat = solve_poisson(forward_transform(s.v) - forward_transform(s.w));
    const VectorField gpsi = backward_transform(gradient(psi_hat));
    const double speed = magnitude(s.u).max_abs() + magnitude(gpsi).max_abs();
    if (speed == 0.0) return kInf;
    return cfl * s.grid().dx() / speed;
}

double choose_dt(const State& s, const StepControl& c) {
    const double remaining = c.t_end - s.t;
    const double limit = std::min(c.dt, cfl_limit(s, c.cfl));
    if (!std::isfinite(limit) && limit != kInf)
        throw BlowUpSuspected("non-finite CFL limit at t=" + std::to_string(s.t));
    // Absorb a sliver so the final step lands on t_end.
    if (remaining <= limit * (1.0 + 1e-6)) return remaining;
    if (limit < c.dt_min) {
        std::ostringstream msg;
        msg << "time step collapsed to " << limit << " < dt_min=" << c.dt_min << " at t=" << s.t;
        throw BlowUpSuspected(msg.str());
    }
    return limit;
}

State advance(const State& s, double dt) {
    try {
        State out = to_physical(if_rk3(to_spectral(s), dt), s.t + dt, s.step_index + 1);
        if (!all_finite(out))
            throw BlowUpSuspected("non-finite state after step " + std::to_string(out.step_index));
        return out;
    } catch (const BlowUpSuspected&) {
        throw;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NonFinite || e.code() == ErrorCode::Hermitian)
            throw BlowUpSuspected(std::string("step failed: ") + e.what());
        throw;
    }
}

State step(const State& s, const StepControl& c) {
    const double dt = choose_dt(s, c);
    State out = advance(s, dt);
    if (c.t_end - s.t == dt) out.t = c.t_end;
    return out;
}

const char* to_string(RunStatus s) noexcept {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::BlowUpSuspected: return "blow_up_suspected";
        case RunStatus::InvariantViolation: return "invariant_violation";
    }
    return "unknown";
}

double max_divergence(const VectorField& u) {
    return backward_transform(divergence(forward_transform(u))).max_abs();
}

bool all_finite(const State& s) {
    auto ok = [](const RealField& f) {
        for (double x : f.samples())
            if (!std::isfinite(x)) return false;
        return true;
    };
    return ok(s.u[0]) && ok(s.u[1]) && ok(s.u[2]) && ok(s.v) && ok(s.w) && std::isfinite(s.t);
}

RunReport run(State s, const StepControl& c, std::span<StepObserver* const> observers) {
    c.validate();
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep{.final_state = s};
    auto finish = [&](RunStatus status, std::string msg) {
        rep.status = status;
        rep.message = std::move(msg);
        rep.t_final = s.t;
        rep.checksum = all_finite(s) ? state_checksum(s) : 0u;
        rep.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.final_state = std::move(s);
        return rep;
    };

    if (!all_finite(s)) return finish(RunStatus::BlowUpSuspected, "initial state is not finite");
    rep.max_divergence = max_divergence(s.u);
    if (rep.max_divergence > kDivergenceTolerance) {
        std::ostringstream msg;
        msg << "initial velocity divergence " << rep.max_divergence << " exceeds "
            << kDivergenceTolerance;
        return finish(RunStatus::InvariantViolation, msg.str());
    }
    const double mv0 = forward_transform(s.v).mean().real();
    const double mw0 = forward_transform(s.w).mean().real();

    try {
        const DerivedFields d0 = derive(s);
        for (auto* o : observers) o->start(s, d0);
        while (s.t < c.t_end) {
            State next = step(s, c);
            const double dt = next.t - s.t;
            const double div = max_divergence(next.u);
            rep.max_divergence = std::max(rep.max_divergence, div);
            const double mv = forward_transform(next.v).mean().real();
            const double mw = forward_transform(next.w).mean().real();
            s = std::move(next);
            ++rep.steps;
            if (div > kDivergenceTolerance) {
                std::ostringstream msg;
                msg << "divergence " << div << " exceeds " << kDivergenceTolerance << " at t=" << s.t;
                return finish(RunStatus::InvariantViolation, msg.str());
            }
            const double drift = std::max(std::abs(mv - mv0) / std::max(std::abs(mv0), 1.0),
                                          std::abs(mw - mw0) / std::max(std::abs(mw0), 1.0));
            if (drift > kMeanDriftTolerance) {
                std::ostringstream msg;
                msg << "charge mean drifted by " << drift << " (relative) at t=" << s.t;
                return finish(RunStatus::InvariantViolation, msg.str());
            }
            const DerivedFields d = derive(s);
            for (auto* o : observers) o->observe(s, d, dt);
        }
    } catch (const BlowUpSuspected& e) {
        return finish(RunStatus::BlowUpSuspected, e.what());
    }
    return finish(RunStatus::Completed, {});
}

}  // namespace ehd
