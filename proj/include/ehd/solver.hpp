#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "ehd/field.hpp"

namespace ehd {

/// Velocity u, negative/positive charge densities v, w, and the clock.
struct State {
    VectorField u;
    RealField v;
    RealField w;
    double t = 0.0;
    std::int64_t step_index = 0;

    static State zeros(const Grid& g);
    const Grid& grid() const noexcept { return v.grid(); }
};

struct StepControl {
    double dt = 1e-2;     ///< requested step; the CFL limit may shorten it
    double cfl = 0.4;
    double t_end = 1.0;
    double dt_min = 1e-10;

    /// Throws Domain unless 0 < dt_min <= dt and 0 < cfl < 1.
    void validate() const;
};

/// Potential, vorticity and the symmetrized charges zeta = v + w, eta = v - w.
struct DerivedFields {
    RealField psi;
    VectorField omega;
    RealField zeta;
    RealField eta;
};

DerivedFields derive(const State& s);

/// P[-(u.grad)u + Lap(psi) grad(psi)], dealiased. Viscosity is left to the integrator.
VectorField momentum_rhs(const State& s);
/// (-div(u v) - div(v grad psi), -div(u w) + div(w grad psi)). Diffusion is left to the integrator.
std::pair<RealField, RealField> charge_rhs(const State& s);

/// cfl * dx / (max|u| + max|grad psi|); +inf for a state at rest with no field.
double cfl_limit(const State& s, double cfl);
/// Step actually taken from s: min(requested, CFL), clipped to land on t_end.
/// Throws BlowUpSuspected if that falls below dt_min before the horizon.
double choose_dt(const State& s, const StepControl& c);

/// One integrating-factor SSP-RK3 step (exact diffusion, explicit coupling terms).
State step(const State& s, const StepControl& c);
/// Same scheme with a fixed dt (no CFL or dt_min logic).
State advance(const State& s, double dt);

enum class RunStatus { Completed, BlowUpSuspected, InvariantViolation };
const char* to_string(RunStatus s) noexcept;

/// Per-step callback. Observers see read-only snapshots; throwing
/// BlowUpSuspected ends the run as blow_up_suspected, other exceptions abort it.
class StepObserver {
public:
    virtual ~StepObserver() = default;
    virtual void start(const State& s, const DerivedFields& d) = 0;
    virtual void observe(const State& s, const DerivedFields& d, double dt) = 0;
};

struct RunReport {
    RunStatus status = RunStatus::Completed;
    std::int64_t steps = 0;
    double t_final = 0.0;
    std::uint32_t checksum = 0;
    double wall_seconds = 0.0;
    double max_divergence = 0.0;
    std::string message;
    State final_state;
};

inline constexpr double kDivergenceTolerance = 1e-9;
inline constexpr double kMeanDriftTolerance = 1e-10;

/// Max-norm divergence of the velocity.
double max_divergence(const VectorField& u);
/// True iff every sample of every field is finite.
bool all_finite(const State& s);

RunReport run(State s0, const StepControl& c, std::span<StepObserver* const> observers);

}  // namespace ehd
