#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ehd/criteria.hpp"
#include "ehd/solver.hpp"

namespace ehd {

enum class Preset { TaylorGreen, ChargedShear, RandomSmooth, FromCheckpoint };
const char* to_string(Preset p) noexcept;

struct InitialCondition {
    Preset preset = Preset::TaylorGreen;
    std::uint64_t seed = 0;
    double energy = 0.5;
    double peak_wavenumber = 2.0;
    std::filesystem::path checkpoint;
};

struct CriterionSpec {
    CriterionKind kind;
    double p;
    std::optional<double> threshold;  ///< nullopt = auto
};

struct RunConfig {
    int grid_n = 32;
    double t_end = 0.0;
    double cfl = 0.4;
    double dt = 1e-2;
    double dt_min = 1e-8;
    InitialCondition initial;
    std::vector<CriterionSpec> criteria;
    std::filesystem::path output_dir = ".";
    std::string series_csv = "series.csv";
    std::string audit_csv = "audit.csv";
    std::string report_json = "report.json";
    int checkpoint_every = 0;  ///< steps between checkpoints; 0 = final only

    StepControl step_control() const { return {dt, cfl, t_end, dt_min}; }
};

/// Parses the flat key-value format:
///
///   # comment
///   grid_n = 32
///   t_end = 0.5
///   initial_condition = taylor_green | charged_shear
///                     | random_smooth(seed, energy, peak_wavenumber)
///                     | from_checkpoint(path)
///   criteria = BKM inf auto, PS_u inf 100, PS_grad_u 3 auto
///
/// Other keys: cfl, dt, dt_min, output_dir, series_csv, audit_csv, report_json,
/// checkpoint_every. Required: t_end, initial_condition. Throws ConfigError
/// listing every violation.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Builds the initial state. Throws ConfigError if charges are not neutral.
State initial_state(const RunConfig& cfg);

/// Analytic Taylor-Green velocity (sin x1 cos x2, -cos x1 sin x2, 0) e^{-2t}.
VectorField taylor_green(const Grid& g, double t = 0.0);
/// v = 1 + sin(x1)/2, w = 1 + sin(x2)/2, u = 0.
State charged_shear(const Grid& g);

}  // namespace ehd
