#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ehd/solver.hpp"

namespace ehd {

/// The four blow-up functionals:
///   Bkm        int ||omega||_inf dt
///   PsU        int ||u||_p^q dt,          2/q + 3/p = 1, 3 < p <= inf
///   PsGradU    int ||grad u||_p^q dt,     2/q + 3/p = 2, 3/2 < p <= inf
///   BesovAniso int ||grad_h u^h||_{B^0_{p,2p/3}}^q dt, same scaling as PsGradU
enum class CriterionKind { Bkm, PsU, PsGradU, BesovAniso };

const char* to_string(CriterionKind k) noexcept;
/// Accepts BKM, PS_u, PS_grad_u, BESOV_ANISO. Returns nullopt otherwise.
std::optional<CriterionKind> parse_criterion_kind(std::string_view name);

struct CriterionSample {
    double t;
    double quantity;   ///< the norm itself
    double integrand;  ///< quantity^q
    double integral;
};

struct CriterionAccumulator {
    CriterionKind kind = CriterionKind::Bkm;
    double p = 0.0;
    double q = 1.0;
    double r = 0.0;       ///< Besov summation exponent (BesovAniso only)
    double target = 2.0;  ///< right-hand side of the scaling relation 2/q + 3/p
    double integral = 0.0;
    double last_quantity = 0.0;
    double last_value = 0.0;  ///< most recent integrand
    double peak = 0.0;        ///< largest integrand seen
    std::optional<double> threshold;
    bool auto_threshold = false;
    double auto_arm_time = 0.0;  ///< time at which an auto threshold is fixed
    std::optional<double> crossing_time;
    bool started = false;
    std::vector<CriterionSample> series;
};

/// Builds an accumulator, deriving q (and r) from p. Throws Domain when p is
/// outside the kind's open range. threshold = nullopt means automatic:
/// 10x the integral at auto_arm_time (see CriteriaMonitor).
CriterionAccumulator make_accumulator(CriterionKind kind, double p,
                                      std::optional<double> threshold = std::nullopt);

/// |2/q + 3/p - target|.
double scaling_defect(const CriterionAccumulator& acc);

/// Instantaneous norm (before raising to q).
double instantaneous_quantity(CriterionKind kind, double p, const State& s, const DerivedFields& d);

/// Pointwise magnitude of the block (d1 u1, d2 u1, d1 u2, d2 u2).
RealField horizontal_gradient_magnitude(const VectorField& u);
/// Pointwise Frobenius norm of grad u.
RealField gradient_magnitude(const VectorField& u);

/// Trapezoidal update. The first call (started == false) only records the
/// integrand at the initial time. Throws BlowUpSuspected on a non-finite quantity.
void observe(CriterionAccumulator& acc, const State& s, const DerivedFields& d, double dt);
/// Same update from an already computed quantity.
void observe_quantity(CriterionAccumulator& acc, double t, double quantity, double dt);

struct CriteriaRow {
    CriterionKind kind;
    double p, q;
    double integral;
    double peak;
    std::optional<double> threshold;
    std::optional<double> crossing_time;
};

struct CriteriaReport {
    RunStatus status;
    std::vector<CriteriaRow> rows;
    /// For blow_up_suspected runs: row indices, earliest threshold crossing first,
    /// non-crossers last (in input order). Empty otherwise.
    std::vector<std::size_t> ranking;
};

CriteriaReport report(const std::vector<CriterionAccumulator>& accs, RunStatus status);

/// Observer that advances a set of accumulators.
class CriteriaMonitor : public StepObserver {
public:
    CriteriaMonitor(std::vector<CriterionAccumulator> accs, double t_end);

    void start(const State& s, const DerivedFields& d) override;
    void observe(const State& s, const DerivedFields& d, double dt) override;

    const std::vector<CriterionAccumulator>& accumulators() const noexcept { return accs_; }

private:
    std::vector<CriterionAccumulator> accs_;
};

}  // namespace ehd
