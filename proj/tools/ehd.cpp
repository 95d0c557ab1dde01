// ehd: run, inspect and audit EHD simulations.
#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "ehd/app.hpp"
#include "ehd/error.hpp"
#include "ehd/grid.hpp"

namespace {

double parse_exponent(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("EHD_THREADS")) {
        const int t = std::atoi(env);
        if (t < 1) {
            std::cerr << ehd::Error(ehd::ErrorCode::Usage, "EHD_THREADS must be a positive integer").tagged() << '\n';
            return ehd::kExitUsage;
        }
        ehd::set_max_threads(t);
    }

    CLI::App app{"Pseudo-spectral EHD simulator with blow-up criteria monitoring"};
    app.require_subcommand(1);

    std::string config;
    auto* run = app.add_subcommand("run", "Run a simulation from a config file");
    run->add_option("config", config, "config file")->required();

    std::string ckpt, field = "v", s_arg = "0", p_arg = "inf", r_arg = "inf";
    auto* besov = app.add_subcommand("besov", "Homogeneous Besov norm of a checkpoint field");
    besov->add_option("checkpoint", ckpt, "checkpoint file")->required();
    besov->add_option("--s", s_arg, "regularity index")->capture_default_str();
    besov->add_option("--p", p_arg, "integrability exponent (number or inf)")->capture_default_str();
    besov->add_option("--r", r_arg, "summation exponent (number or inf)")->capture_default_str();
    besov->add_option("--field", field, "v, w, u1, u2 or u3")->capture_default_str();

    std::string dir;
    auto* audit = app.add_subcommand("audit", "Summarize the audit series of a run directory");
    audit->add_option("dir", dir, "run output directory")->required();

    std::string report;
    std::string plot_dir;
    auto* rep = app.add_subcommand("report", "Print a report table and export plot data");
    rep->add_option("report", report, "report JSON")->required();
    rep->add_option("--plot-dir", plot_dir, "where to write per-criterion CSVs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << ehd::Error(ehd::ErrorCode::Usage, e.what()).tagged() << '\n';
        return ehd::kExitUsage;
    }

    if (*run) return ehd::cmd_run(config, std::cout, std::cerr);
    if (*besov) {
        double s, p, r;
        try {
            s = parse_exponent(s_arg);
            p = parse_exponent(p_arg);
            r = parse_exponent(r_arg);
        } catch (const std::exception&) {
            std::cerr << ehd::Error(ehd::ErrorCode::Usage, "--s, --p, --r must be numbers or inf").tagged() << '\n';
            return ehd::kExitUsage;
        }
        return ehd::cmd_besov(ckpt, s, p, r, field, std::cout, std::cerr);
    }
    if (*audit) return ehd::cmd_audit(dir, std::cout, std::cerr);
    if (plot_dir.empty()) return ehd::cmd_report(report, std::cout, std::cerr);
    return ehd::cmd_report(report, std::cout, std::cerr, plot_dir);
}
