#include "ehd/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehd/error.hpp"
#include "ehd/littlewood_paley.hpp"
#include "ehd/spectral.hpp"

namespace ehd {

const char* to_string(CriterionKind k) noexcept {
    switch (k) {
        case CriterionKind::Bkm: return "BKM";
        case CriterionKind::PsU: return "PS_u";
        case CriterionKind::PsGradU: return "PS_grad_u";
        case CriterionKind::BesovAniso: return "BESOV_ANISO";
    }
    return "?";
}

std::optional<CriterionKind> parse_criterion_kind(std::string_view name) {
    for (auto k : {CriterionKind::Bkm, CriterionKind::PsU, CriterionKind::PsGradU,
                   CriterionKind::BesovAniso})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

namespace {
double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

std::string fmt_p(double p) {
    if (std::isinf(p)) return "inf";
    std::ostringstream os;
    os << p;
    return os.str();
}
}  // namespace

CriterionAccumulator make_accumulator(CriterionKind kind, double p, std::optional<double> threshold) {
    CriterionAccumulator acc;
    acc.kind = kind;
    acc.p = p;
    auto reject = [&](const char* range) {
        throw Error(ErrorCode::Domain, std::string(to_string(kind)) + " requires " + range +
                                           " (got p=" + fmt_p(p) + ")");
    };
    switch (kind) {
        case CriterionKind::Bkm:
            if (!std::isinf(p) || p < 0) reject("p = inf (max-norm of vorticity)");
            acc.q = 1.0;
            acc.target = 2.0;
            break;
        case CriterionKind::PsU:
            if (!(p > 3.0)) reject("3 < p <= inf");
            acc.q = std::isinf(p) ? 2.0 : 2.0 * p / (p - 3.0);
            acc.target = 1.0;
            break;
        case CriterionKind::PsGradU:
        case CriterionKind::BesovAniso:
            if (!(p > 1.5)) reject("3/2 < p <= inf");
            acc.q = std::isinf(p) ? 1.0 : 2.0 * p / (2.0 * p - 3.0);
            acc.target = 2.0;
            if (kind == CriterionKind::BesovAniso) acc.r = std::isinf(p) ? p : 2.0 * p / 3.0;
            break;
    }
    if (threshold && !(*threshold >= 0.0))
        throw Error(ErrorCode::Domain, "criterion threshold must be >= 0");
    acc.threshold = threshold;
    acc.auto_threshold = !threshold.has_value();
    return acc;
}

double scaling_defect(const CriterionAccumulator& acc) {
    return std::abs(2.0 / acc.q + 3.0 * inv(acc.p) - acc.target);
}

RealField gradient_magnitude(const VectorField& u) {
    const SpectralVectorField U = forward_transform(u);
    std::vector<RealField> parts;
    parts.reserve(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) parts.push_back(backward_transform(derivative(U[i], j)));
    std::vector<const RealField*> ptrs;
    for (const auto& f : parts) ptrs.push_back(&f);
    return magnitude(ptrs);
}

RealField horizontal_gradient_magnitude(const VectorField& u) {
    const SpectralField u1 = forward_transform(u[0]);
    const SpectralField u2 = forward_transform(u[1]);
    const RealField parts[4] = {backward_transform(derivative(u1, 0)), backward_transform(derivative(u1, 1)),
                                backward_transform(derivative(u2, 0)), backward_transform(derivative(u2, 1))};
    const RealField* ptrs[4] = {&parts[0], &parts[1], &parts[2], &parts[3]};
    return magnitude(ptrs);
}

double instantaneous_quantity(CriterionKind kind, double p, const State& s, const DerivedFields& d) {
    switch (kind) {
        case CriterionKind::Bkm: return lp_norm(magnitude(d.omega), kInf);
        case CriterionKind::PsU: return lp_norm(magnitude(s.u), p);
        case CriterionKind::PsGradU: return lp_norm(gradient_magnitude(s.u), p);
        case CriterionKind::BesovAniso: {
            const BesovParams params{0.0, p, std::isinf(p) ? p : 2.0 * p / 3.0};
            return besov_norm(forward_transform(horizontal_gradient_magnitude(s.u)), params);
        }
    }
    return 0.0;
}

void observe_quantity(CriterionAccumulator& acc, double t, double quantity, double dt) {
    if (!std::isfinite(quantity)) {
        std::ostringstream msg;
        msg << to_string(acc.kind) << " integrand is not finite at t=" << t;
        throw BlowUpSuspected(msg.str());
    }
    const double integrand = std::pow(quantity, acc.q);
    if (acc.started) {
        acc.integral += 0.5 * dt * (acc.last_value + integrand);
    }
    acc.started = true;
    acc.last_quantity = quantity;
    acc.last_value = integrand;
    acc.peak = std::max(acc.peak, integrand);
    if (acc.auto_threshold && !acc.threshold && t >= acc.auto_arm_time)
        acc.threshold = 10.0 * acc.integral;
    if (acc.threshold && !acc.crossing_time && acc.integral > *acc.threshold) acc.crossing_time = t;
    acc.series.push_back({t, quantity, integrand, acc.integral});
}

void observe(CriterionAccumulator& acc, const State& s, const DerivedFields& d, double dt) {
    observe_quantity(acc, s.t, instantaneous_quantity(acc.kind, acc.p, s, d), dt);
}

CriteriaReport report(const std::vector<CriterionAccumulator>& accs, RunStatus status) {
    CriteriaReport rep{status, {}, {}};
    for (const auto& a : accs)
        rep.rows.push_back({a.kind, a.p, a.q, a.integral, a.peak, a.threshold, a.crossing_time});
    if (status == RunStatus::BlowUpSuspected) {
        for (std::size_t i = 0; i < accs.size(); ++i) rep.ranking.push_back(i);
        std::stable_sort(rep.ranking.begin(), rep.ranking.end(), [&](std::size_t a, std::size_t b) {
            const auto& ca = accs[a].crossing_time;
            const auto& cb = accs[b].crossing_time;
            if (ca && cb) return *ca < *cb;
            return ca.has_value() && !cb.has_value();
        });
    }
    return rep;
}

CriteriaMonitor::CriteriaMonitor(std::vector<CriterionAccumulator> accs, double t_end)
    : accs_(std::move(accs)) {
    for (auto& a : accs_) a.auto_arm_time = 0.1 * t_end;
}

void CriteriaMonitor::start(const State& s, const DerivedFields& d) {
    for (auto& a : accs_) ehd::observe(a, s, d, 0.0);
}

void CriteriaMonitor::observe(const State& s, const DerivedFields& d, double dt) {
    for (auto& a : accs_) ehd::observe(a, s, d, dt);
}

}  // namespace ehd
