#include "ehd/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "ehd/criteria.hpp"
#include "ehd/spectral.hpp"

namespace ehd {

namespace {

double grad_l2_squared(const SpectralField& F) {
    const double h = homogeneous_sobolev_norm(F, 1.0);
    return h * h;
}

double integrate(const RealField& f) {
    double s = 0.0;
    for (double x : f.samples()) s += x;
    return s * f.grid().cell_volume();
}

}  // namespace

EnergyBudget energy_budget(const State& s) {
    const SpectralField V = forward_transform(s.v);
    const SpectralField W = forward_transform(s.w);
    const SpectralVectorField U = forward_transform(s.u);
    const SpectralField psi = solve_poisson(V - W);
    const double grad_psi2 = grad_l2_squared(psi);
    const double lap_psi2 = l2_squared(laplacian(psi));
    double grad_u2 = 0.0;
    for (int i = 0; i < 3; ++i) grad_u2 += grad_l2_squared(U[i]);
    return EnergyBudget{l2_squared(V) + l2_squared(W),
                        l2_squared(U) + grad_psi2,
                        grad_l2_squared(V) + grad_l2_squared(W),
                        positivity_term(s),
                        grad_u2 + lap_psi2,
                        drift_term(s)};
}

AuditLedger make_ledger(const State& s0) {
    AuditLedger l;
    l.last = energy_budget(s0);
    l.e0_charges = l.last.charge_energy;
    l.e0_vel = l.last.velocity_energy;
    return l;
}

void accumulate(AuditLedger& l, const EnergyBudget& b, double dt) {
    // Integral over the new step of the quadratic through the last three samples
    // (previous step length h1, this one h2); trapezoid on the first step.
    double w0 = 0.0, w1 = 0.5 * dt, w2 = 0.5 * dt;
    if (l.prev_dt > 0.0) {
        const double h1 = l.prev_dt, h2 = dt;
        w0 = -h2 * h2 * h2 / (6.0 * h1 * (h1 + h2));
        w1 = h2 * (h2 + 3.0 * h1) / (6.0 * h1);
        w2 = h2 * (2.0 * h2 + 3.0 * h1) / (6.0 * (h1 + h2));
    }
    auto step = [&](double EnergyBudget::*m) {
        return 2.0 * (w0 * l.prev.*m + w1 * l.last.*m + w2 * b.*m);
    };
    l.d_charges += step(&EnergyBudget::charge_dissipation);
    l.d_cross += step(&EnergyBudget::cross);
    l.d_vel += step(&EnergyBudget::velocity_dissipation);
    l.d_drift += step(&EnergyBudget::drift);
    l.prev = l.last;
    l.prev_dt = dt;
    l.last = b;
    ++l.steps;
}

void accumulate(AuditLedger& l, const EnergyBudget& mid, const EnergyBudget& b, double dt) {
    auto step = [&](double EnergyBudget::*m) { return dt / 3.0 * (l.last.*m + 4.0 * mid.*m + b.*m); };
    l.d_charges += step(&EnergyBudget::charge_dissipation);
    l.d_cross += step(&EnergyBudget::cross);
    l.d_vel += step(&EnergyBudget::velocity_dissipation);
    l.d_drift += step(&EnergyBudget::drift);
    l.prev = l.last;
    l.prev_dt = dt;
    l.last = b;
    ++l.steps;
}

void accumulate(AuditLedger& l, const State& s, double dt) { accumulate(l, energy_budget(s), dt); }

IdentityCheck check_charge_identity(const AuditLedger& l, const State& s, double tol) {
    const double energy = l2_squared(forward_transform(s.v)) + l2_squared(forward_transform(s.w));
    const double lhs = energy + l.d_charges + 0.5 * l.d_cross;
    const double diff = std::abs(lhs - l.e0_charges);
    const double residual = l.e0_charges > 0.0 ? diff / l.e0_charges : diff;
    return {residual, residual <= tol};
}

double check_velocity_decay(const AuditLedger& l, const State& s) {
    const SpectralField psi = solve_poisson(forward_transform(s.v) - forward_transform(s.w));
    const double energy = l2_squared(forward_transform(s.u)) + grad_l2_squared(psi);
    return l.e0_vel - (energy + l.d_vel);
}

double positivity_term(const State& s) {
    const auto a = s.v.samples();
    const auto b = s.w.samples();
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += (a[i] + b[i]) * d * d;
    }
    return sum * s.grid().cell_volume();
}

double drift_term(const State& s) {
    const SpectralField psi = solve_poisson(forward_transform(s.v) - forward_transform(s.w));
    const RealField g2 = [&] {
        const VectorField gp = backward_transform(gradient(psi));
        RealField out(s.grid());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = gp[0][i] * gp[0][i] + gp[1][i] * gp[1][i] + gp[2][i] * gp[2][i];
        return out;
    }();
    return integrate(multiply(s.v + s.w, g2));
}

double log_sobolev_ratio(const State& s) {
    const double grad_inf = lp_norm(gradient_magnitude(s.u), kInf);
    if (grad_inf == 0.0) return 0.0;
    const SpectralVectorField U = forward_transform(s.u);
    const VectorField omega = backward_transform(curl(U));
    const RealField om = magnitude(omega);
    double h3 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double c = sobolev_norm(U[i], 3.0);
        h3 += c * c;
    }
    const double denom =
        1.0 + lp_norm(om, 2.0) + lp_norm(om, kInf) * std::log(std::numbers::e + std::sqrt(h3));
    return grad_inf / denom;
}

double y_growth(const State& s) {
    const SpectralVectorField U = forward_transform(s.u);
    double y = std::numbers::e;
    for (int i = 0; i < 3; ++i) y += std::pow(sobolev_norm(U[i], 3.0), 2);
    y += std::pow(sobolev_norm(forward_transform(s.v), 2.0), 2);
    y += std::pow(sobolev_norm(forward_transform(s.w), 2.0), 2);
    return y;
}

std::optional<std::pair<double, double>> gn_ratios(const RealField& f) {
    const SpectralField F = forward_transform(f);
    const double l2 = lp_norm(f, 2.0);
    const double grad = homogeneous_sobolev_norm(F, 1.0);
    if (!(grad > 1e-14 * l2) || l2 == 0.0) return std::nullopt;
    const double r4 = lp_norm(f, 4.0) / (std::pow(l2, 0.25) * std::pow(grad, 0.75));
    const double r3 = lp_norm(f, 3.0) / (std::sqrt(l2) * std::sqrt(grad));
    return std::pair{r4, r3};
}

AuditMonitor::AuditMonitor(std::ostream* csv) : csv_(csv) {}

const char* AuditMonitor::csv_header() {
    return "t,charge_identity_residual,velocity_margin,positivity_term,ls_ratio,Y,gn_ratio_L4,gn_ratio_L3";
}

void AuditMonitor::start(const State& s, const DerivedFields&) {
    ledger_ = make_ledger(s);
    summary_ = AuditSummary{};
    summary_.min_charge = std::min(s.v.min(), s.w.min());
    if (csv_) *csv_ << csv_header() << '\n';
    initial_ = s;
    record(s);
}

void AuditMonitor::observe(const State& s, const DerivedFields&, double dt) {
    if (initial_) {
        const EnergyBudget mid = energy_budget(advance(*initial_, 0.5 * dt));
        initial_.reset();
        accumulate(*ledger_, mid, energy_budget(s), dt);
    } else {
        accumulate(*ledger_, s, dt);
    }
    record(s);
}

void AuditMonitor::record(const State& s) {
    AuditLedger& l = *ledger_;
    const auto id = check_charge_identity(l, s);
    const double margin = check_velocity_decay(l, s);
    const double scale = l.e0_vel > 0.0 ? l.e0_vel : 1.0;
    const double ls = log_sobolev_ratio(s);
    const double y = y_growth(s);
    const auto gn = gn_ratios(s.v);
    l.y_series.emplace_back(s.t, y);
    l.ls_ratio_series.emplace_back(s.t, ls);

    summary_.max_charge_residual = std::max(summary_.max_charge_residual, id.residual);
    summary_.min_velocity_margin = std::min(summary_.min_velocity_margin, margin / scale);
    summary_.max_drift_mismatch =
        std::max(summary_.max_drift_mismatch, std::abs(margin - l.d_drift) / scale);
    const double mc = std::min(s.v.min(), s.w.min());
    summary_.min_charge = std::min(summary_.min_charge, mc);
    if (mc < -kNegativityTolerance) summary_.negativity_flag = true;
    summary_.max_ls_ratio = std::max(summary_.max_ls_ratio, ls);
    summary_.max_y = std::max(summary_.max_y, y);
    ++summary_.rows;

    if (csv_) {
        auto& o = *csv_;
        const auto prec = o.precision(17);
        o << s.t << ',' << id.residual << ',' << margin << ',' << l.last.cross << ',' << ls << ','
          << y << ',';
        if (gn)
            o << gn->first << ',' << gn->second;
        else
            o << "nan,nan";
        o << '\n';
        o.precision(prec);
    }
}

}  // namespace ehd
