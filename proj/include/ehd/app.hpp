#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ehd/audit.hpp"
#include "ehd/config.hpp"
#include "ehd/criteria.hpp"
#include "ehd/solver.hpp"

namespace ehd {

inline constexpr int kReportFormatVersion = 1;

/// Exit codes of the `ehd` tool.
enum ExitCode : int { kExitCompleted = 0, kExitUsage = 1, kExitBlowUp = 2, kExitInvariant = 3 };

int exit_code(RunStatus s) noexcept;

/// Everything a finished run produced.
struct RunOutcome {
    RunReport run;
    std::vector<CriterionAccumulator> criteria;
    CriteriaReport table;
    AuditSummary audit;
    double e0_charges = 0.0;
    double e0_vel = 0.0;
};

/// Series CSV header: t, dt, the criteria columns, then energy (||u||^2) and
/// the spectral tail fraction of the vorticity.
const char* series_csv_header();

/// Runs cfg, writing series/audit CSVs, checkpoints and the report JSON under
/// cfg.output_dir. Throws ConfigError if dt_min exceeds the step allowed at t = 0.
RunOutcome execute(const RunConfig& cfg);

/// Report JSON document (pretty-printed). Non-finite numbers are written as
/// the strings "inf", "-inf", "nan".
std::string render_report(const RunConfig& cfg, const RunOutcome& out);

/// CLI commands. Each returns the process exit code and reports failures on
/// err as "EHD-E<code>: message".
int cmd_run(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
/// field: one of v, w, u1, u2, u3.
int cmd_besov(const std::filesystem::path& checkpoint, double s, double p, double r,
              const std::string& field, std::ostream& out, std::ostream& err);
/// Summarizes audit.csv (and report.json if present) in dir. Exit 3 if the
/// charge identity or the velocity decay margin fails.
int cmd_audit(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);
/// Prints the criteria table and writes <plot_dir>/<KIND>_<i>.csv with columns
/// t,integrand,integral. plot_dir defaults to the report's directory.
int cmd_report(const std::filesystem::path& report, std::ostream& out, std::ostream& err,
               std::optional<std::filesystem::path> plot_dir = std::nullopt);

}  // namespace ehd
