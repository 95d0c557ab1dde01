#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "ehd/solver.hpp"

namespace ehd {

/// Instantaneous energies and dissipation rates entering the two energy balances.
struct EnergyBudget {
    double charge_energy;    ///< ||v||^2 + ||w||^2
    double velocity_energy;  ///< ||u||^2 + ||grad psi||^2
    double charge_dissipation;    ///< ||grad v||^2 + ||grad w||^2
    double cross;                 ///< int (v+w)(v-w)^2
    double velocity_dissipation;  ///< ||grad u||^2 + ||Lap psi||^2
    double drift;                 ///< int (v+w)|grad psi|^2
};

EnergyBudget energy_budget(const State& s);

/// Initial energies and running dissipation integrals (three-point rule,
/// third order in the step).
///
/// With exact time integration,
///   ||v||^2 + ||w||^2 + d_charges + d_cross / 2 = e0_charges
///   ||u||^2 + ||grad psi||^2 + d_vel + d_drift = e0_vel
/// and d_drift >= 0 whenever v, w >= 0.
struct AuditLedger {
    double e0_charges = 0.0;
    double e0_vel = 0.0;
    double d_charges = 0.0;  ///< 2 int (||grad v||^2 + ||grad w||^2)
    double d_cross = 0.0;    ///< 2 int int (v+w)(v-w)^2
    double d_vel = 0.0;      ///< 2 int (||grad u||^2 + ||Lap psi||^2)
    double d_drift = 0.0;    ///< 2 int int (v+w)|grad psi|^2
    EnergyBudget last{};
    EnergyBudget prev{};  ///< sample before last
    double prev_dt = 0.0;  ///< 0 until the first step
    std::int64_t steps = 0;
    std::vector<std::pair<double, double>> y_series;
    std::vector<std::pair<double, double>> ls_ratio_series;
};

AuditLedger make_ledger(const State& s0);
/// Adds one accepted step of length dt ending at s.
void accumulate(AuditLedger& ledger, const State& s, double dt);
void accumulate(AuditLedger& ledger, const EnergyBudget& b, double dt);
/// Simpson's rule with a midpoint sample; used for the first step, where the
/// three-point rule has no history.
void accumulate(AuditLedger& ledger, const EnergyBudget& mid, const EnergyBudget& b, double dt);

struct IdentityCheck {
    double residual;  ///< |LHS - RHS| / e0_charges (0 when e0_charges = 0)
    bool ok;
};

inline constexpr double kChargeIdentityTolerance = 1e-5;

IdentityCheck check_charge_identity(const AuditLedger& ledger, const State& s,
                                    double tol = kChargeIdentityTolerance);
/// e0_vel - (||u||^2 + ||grad psi||^2 + d_vel). Nonnegative for nonnegative
/// charges; equals d_drift up to time-quadrature error.
double check_velocity_decay(const AuditLedger& ledger, const State& s);

/// int (v+w)(v-w)^2 dx.
double positivity_term(const State& s);
/// int (v+w)|grad psi|^2 dx.
double drift_term(const State& s);

/// ||grad u||_inf / (1 + ||omega||_2 + ||omega||_inf ln(e + ||u||_H3)).
double log_sobolev_ratio(const State& s);
/// e + ||u||_H3^2 + ||v||_H2^2 + ||w||_H2^2.
double y_growth(const State& s);
/// (||f||_4 / (||f||_2^(1/4) ||grad f||_2^(3/4)), ||f||_3 / (||f||_2^(1/2) ||grad f||_2^(1/2))).
/// nullopt for (numerically) constant f.
std::optional<std::pair<double, double>> gn_ratios(const RealField& f);

struct AuditSummary {
    double max_charge_residual = 0.0;
    double min_velocity_margin = 0.0;    ///< relative to e0_vel
    double max_drift_mismatch = 0.0;     ///< |margin - d_drift| / e0_vel
    double min_charge = 0.0;
    bool negativity_flag = false;        ///< min(v, w) < -1e-8 at some step
    double max_ls_ratio = 0.0;
    double max_y = 0.0;
    std::int64_t rows = 0;
};

inline constexpr double kNegativityTolerance = 1e-8;

/// Observer maintaining a ledger and, optionally, the audit CSV.
class AuditMonitor : public StepObserver {
public:
    explicit AuditMonitor(std::ostream* csv = nullptr);

    void start(const State& s, const DerivedFields& d) override;
    void observe(const State& s, const DerivedFields& d, double dt) override;

    const AuditLedger& ledger() const { return *ledger_; }
    const AuditSummary& summary() const noexcept { return summary_; }

    static const char* csv_header();

private:
    void record(const State& s);

    std::ostream* csv_;
    std::optional<AuditLedger> ledger_;
    std::optional<State> initial_;  ///< kept until the first step's midpoint sample
    AuditSummary summary_;
};

}  // namespace ehd
