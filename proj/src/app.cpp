#include "ehd/app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "ehd/checkpoint.hpp"
#include "ehd/error.hpp"
#include "ehd/littlewood_paley.hpp"
#include "ehd/spectral.hpp"

namespace ehd {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code(RunStatus s) noexcept {
    switch (s) {
        case RunStatus::Completed: return kExitCompleted;
        case RunStatus::BlowUpSuspected: return kExitBlowUp;
        case RunStatus::InvariantViolation: return kExitInvariant;
    }
    return kExitUsage;
}

const char* series_csv_header() {
    return "t,dt,bkm_integrand,bkm_integral,ps_u_p,ps_u_integral,ps_gradu_integral,"
           "besov_aniso_integrand,besov_aniso_integral,energy,omega_tail_fraction";
}

namespace {

json num(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double as_number(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    throw Error(ErrorCode::Io, "report: expected a number, got " + j.dump());
}

json opt(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

std::string initial_condition_text(const InitialCondition& ic) {
    std::ostringstream ss;
    ss << to_string(ic.preset);
    if (ic.preset == Preset::RandomSmooth)
        ss << '(' << ic.seed << ", " << std::setprecision(17) << ic.energy << ", " << ic.peak_wavenumber << ')';
    else if (ic.preset == Preset::FromCheckpoint)
        ss << '(' << ic.checkpoint.string() << ')';
    return ss.str();
}

/// Weighted tail fraction over the components of a vector field.
double tail_fraction(const VectorField& f) {
    double tail = 0.0;
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        const SpectralField F = forward_transform(f[c]);
        const double e = l2_squared(F);
        total += e;
        tail += e * spectral_tail_fraction(F);
    }
    return total > 0.0 ? tail / total : 0.0;
}

class SeriesWriter : public StepObserver {
public:
    SeriesWriter(std::ostream& out, const CriteriaMonitor& criteria) : out_(out), criteria_(criteria) {
        out_ << std::setprecision(17);
    }

    void start(const State& s, const DerivedFields& d) override {
        out_ << series_csv_header() << '\n';
        write(s, d, 0.0);
    }
    void observe(const State& s, const DerivedFields& d, double dt) override { write(s, d, dt); }

private:
    const CriterionAccumulator* first(CriterionKind k) const {
        for (const auto& a : criteria_.accumulators())
            if (a.kind == k) return &a;
        return nullptr;
    }

    void write(const State& s, const DerivedFields& d, double dt) {
        const auto* bkm = first(CriterionKind::Bkm);
        const auto* psu = first(CriterionKind::PsU);
        const auto* psg = first(CriterionKind::PsGradU);
        const auto* bes = first(CriterionKind::BesovAniso);
        auto put = [&](const CriterionAccumulator* a, double CriterionAccumulator::*m) {
            out_ << ',';
            if (a) out_ << a->*m;
            else out_ << "nan";
        };
        out_ << s.t << ',' << dt;
        put(bkm, &CriterionAccumulator::last_value);
        put(bkm, &CriterionAccumulator::integral);
        put(psu, &CriterionAccumulator::last_quantity);
        put(psu, &CriterionAccumulator::integral);
        put(psg, &CriterionAccumulator::integral);
        put(bes, &CriterionAccumulator::last_value);
        put(bes, &CriterionAccumulator::integral);
        out_ << ',' << l2_squared(forward_transform(s.u)) << ',' << tail_fraction(d.omega) << '\n';
    }

    std::ostream& out_;
    const CriteriaMonitor& criteria_;
};

class CheckpointWriter : public StepObserver {
public:
    CheckpointWriter(fs::path dir, int every) : dir_(std::move(dir)), every_(every) {}

    void start(const State&, const DerivedFields&) override {}
    void observe(const State& s, const DerivedFields&, double) override {
        if (every_ <= 0 || s.step_index % every_ != 0) return;
        char name[64];
        std::snprintf(name, sizeof name, "checkpoint_%06lld.ehds", static_cast<long long>(s.step_index));
        write_checkpoint(dir_ / name, s);
    }

private:
    fs::path dir_;
    int every_;
};

std::ofstream open_output(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
    return out;
}

}  // namespace

RunOutcome execute(const RunConfig& cfg) {
    const StepControl control = cfg.step_control();
    control.validate();

    State s0 = initial_state(cfg);
    if (s0.t >= cfg.t_end) {
        std::ostringstream msg;
        msg << "t_end = " << cfg.t_end << " is not after the initial time " << s0.t;
        throw ConfigError({msg.str()});
    }
    if (all_finite(s0)) {
        const double first = std::min({cfg.dt, cfl_limit(s0, cfg.cfl), cfg.t_end - s0.t});
        if (first < cfg.dt_min) {
            std::ostringstream msg;
            msg << std::setprecision(6) << "dt_min = " << cfg.dt_min << " exceeds the largest stable step "
                << first << " at t = " << s0.t << " (cfl = " << cfg.cfl << "); lower dt_min or cfl";
            throw ConfigError({msg.str()});
        }
    }

    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + cfg.output_dir.string() + ": " + ec.message());

    std::vector<CriterionAccumulator> accs;
    for (const auto& c : cfg.criteria) accs.push_back(make_accumulator(c.kind, c.p, c.threshold));

    auto series = open_output(cfg.output_dir / cfg.series_csv);
    auto audit_csv = open_output(cfg.output_dir / cfg.audit_csv);

    CriteriaMonitor criteria(std::move(accs), cfg.t_end);
    AuditMonitor audit(&audit_csv);
    SeriesWriter writer(series, criteria);
    CheckpointWriter checkpoints(cfg.output_dir, cfg.checkpoint_every);
    StepObserver* observers[] = {&criteria, &audit, &writer, &checkpoints};

    RunOutcome out{.run = run(std::move(s0), control, observers)};
    out.criteria = criteria.accumulators();
    out.table = report(out.criteria, out.run.status);
    out.audit = audit.summary();
    if (out.audit.rows > 0) {
        out.e0_charges = audit.ledger().e0_charges;
        out.e0_vel = audit.ledger().e0_vel;
    }

    series.close();
    audit_csv.close();
    write_checkpoint(cfg.output_dir / "final.ehds", out.run.final_state);
    auto report_out = open_output(cfg.output_dir / cfg.report_json);
    report_out << render_report(cfg, out) << '\n';
    if (!report_out) throw Error(ErrorCode::Io, "failed writing " + (cfg.output_dir / cfg.report_json).string());
    return out;
}

std::string render_report(const RunConfig& cfg, const RunOutcome& out) {
    json doc;
    doc["format_version"] = kReportFormatVersion;

    json config;
    config["grid_n"] = out.run.final_state.grid().n();
    config["t_end"] = num(cfg.t_end);
    config["cfl"] = num(cfg.cfl);
    config["dt"] = num(cfg.dt);
    config["dt_min"] = num(cfg.dt_min);
    config["initial_condition"] = initial_condition_text(cfg.initial);
    config["criteria"] = json::array();
    for (const auto& c : cfg.criteria)
        config["criteria"].push_back({{"kind", to_string(c.kind)}, {"p", num(c.p)},
                                      {"threshold", c.threshold ? num(*c.threshold) : json("auto")}});
    config["outputs"] = {{"output_dir", cfg.output_dir.string()},
                         {"series_csv", cfg.series_csv},
                         {"audit_csv", cfg.audit_csv},
                         {"report_json", cfg.report_json},
                         {"checkpoint_every", cfg.checkpoint_every}};
    doc["config"] = config;

    char checksum[16];
    std::snprintf(checksum, sizeof checksum, "%08x", static_cast<unsigned>(out.run.checksum));
    doc["run"] = {{"status", to_string(out.run.status)},
                  {"exit_code", exit_code(out.run.status)},
                  {"message", out.run.message},
                  {"steps", out.run.steps},
                  {"t_final", num(out.run.t_final)},
                  {"checksum", checksum},
                  {"max_divergence", num(out.run.max_divergence)}};
    doc["wall_clock"] = {{"seconds", out.run.wall_seconds}};

    json table = json::array();
    for (std::size_t i = 0; i < out.criteria.size(); ++i) {
        const auto& a = out.criteria[i];
        json row = {{"kind", to_string(a.kind)},
                    {"p", num(a.p)},
                    {"q", num(a.q)},
                    {"integral", num(a.integral)},
                    {"peak_integrand", num(a.peak)},
                    {"threshold", opt(a.threshold)},
                    {"threshold_mode", a.auto_threshold ? "auto" : "user"},
                    {"crossing_time", opt(a.crossing_time)}};
        if (a.kind == CriterionKind::BesovAniso) row["r"] = num(a.r);
        json t = json::array(), quantity = json::array(), integrand = json::array(), integral = json::array();
        for (const auto& smp : a.series) {
            t.push_back(num(smp.t));
            quantity.push_back(num(smp.quantity));
            integrand.push_back(num(smp.integrand));
            integral.push_back(num(smp.integral));
        }
        row["series"] = {{"t", t}, {"quantity", quantity}, {"integrand", integrand}, {"integral", integral}};
        table.push_back(row);
    }
    doc["criteria"] = table;
    json ranking = json::array();
    for (auto i : out.table.ranking) ranking.push_back({{"index", i}, {"kind", to_string(out.criteria[i].kind)}});
    doc["ranking"] = ranking;

    const auto& a = out.audit;
    doc["audit"] = {{"rows", a.rows},
                    {"e0_charges", num(out.e0_charges)},
                    {"e0_vel", num(out.e0_vel)},
                    {"max_charge_residual", num(a.max_charge_residual)},
                    {"min_velocity_margin", num(a.min_velocity_margin)},
                    {"max_drift_mismatch", num(a.max_drift_mismatch)},
                    {"min_charge", num(a.min_charge)},
                    {"negativity_flag", a.negativity_flag},
                    {"max_ls_ratio", num(a.max_ls_ratio)},
                    {"max_y", num(a.max_y)}};
    return doc.dump(2);
}

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << e.tagged() << '\n';
    } catch (const json::exception& e) {
        err << Error(ErrorCode::Io, std::string("malformed JSON: ") + e.what()).tagged() << '\n';
    } catch (const std::exception& e) {
        err << Error(ErrorCode::Usage, e.what()).tagged() << '\n';
    }
    return kExitUsage;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
    return json::parse(in);
}

}  // namespace

int cmd_run(const fs::path& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig cfg = load_config(config);
        const RunOutcome res = execute(cfg);
        const auto& r = res.run;
        out << "status " << to_string(r.status) << "\nsteps " << r.steps << "\nt_final " << std::setprecision(17)
            << r.t_final << "\nreport " << (cfg.output_dir / cfg.report_json).string() << '\n';
        if (r.status == RunStatus::BlowUpSuspected)
            err << Error(ErrorCode::BlowUp, "blow-up suspected at t = " + std::to_string(r.t_final) + ": " + r.message)
                       .tagged()
                << '\n';
        else if (r.status == RunStatus::InvariantViolation)
            err << Error(ErrorCode::Invariant, "invariant violated at t = " + std::to_string(r.t_final) + ": " +
                                                   r.message)
                       .tagged()
                << '\n';
        return exit_code(r.status);
    });
}

int cmd_besov(const fs::path& checkpoint, double s, double p, double r, const std::string& field,
              std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const BesovParams params{s, p, r};
        params.validate();
        const State st = read_checkpoint(checkpoint);
        const RealField* f = nullptr;
        if (field == "v") f = &st.v;
        else if (field == "w") f = &st.w;
        else if (field == "u1") f = &st.u[0];
        else if (field == "u2") f = &st.u[1];
        else if (field == "u3") f = &st.u[2];
        else throw Error(ErrorCode::Usage, "unknown field '" + field + "' (v, w, u1, u2, u3)");
        const SpectralField F = forward_transform(*f);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.15g", besov_norm(F, params));
        out << buf << '\n';
        if (std::isinf(p)) {
            std::snprintf(buf, sizeof buf, "%.6g", spectral_tail_fraction(F));
            out << "tail_fraction " << buf << '\n';
        }
        return kExitCompleted;
    });
}

namespace {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw Error(ErrorCode::Io, "missing column '" + name + "'");
    }
};

Csv read_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
    Csv csv;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Io, p.string() + " is empty");
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) csv.header.push_back(cell);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) {
            try {
                row.push_back(cell == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(cell));
            } catch (const std::exception&) {
                throw Error(ErrorCode::Io, p.string() + ":" + std::to_string(line_no) + ": bad value '" + cell + "'");
            }
        }
        if (row.size() != csv.header.size())
            throw Error(ErrorCode::Io, p.string() + ":" + std::to_string(line_no) + ": expected " +
                                           std::to_string(csv.header.size()) + " columns");
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

}  // namespace

int cmd_audit(const fs::path& dir, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        double e0_vel = 1.0;
        std::string audit_name = "audit.csv";
        if (fs::exists(dir / "report.json")) {
            const json rep = read_json(dir / "report.json");
            const double e = as_number(rep.at("audit").at("e0_vel"));
            if (e > 0.0) e0_vel = e;
            audit_name = rep.at("config").at("outputs").at("audit_csv").get<std::string>();
        }
        const Csv csv = read_csv(dir / audit_name);
        const auto ci = csv.column("charge_identity_residual");
        const auto cm = csv.column("velocity_margin");
        const auto cp = csv.column("positivity_term");
        const auto cl = csv.column("ls_ratio");
        const auto cy = csv.column("Y");
        const auto c4 = csv.column("gn_ratio_L4");
        const auto c3 = csv.column("gn_ratio_L3");

        constexpr double inf = std::numeric_limits<double>::infinity();
        double max_res = 0.0, min_margin = inf, min_pos = inf, max_ls = 0.0, max_y = 0.0;
        double gn4[2] = {inf, -inf}, gn3[2] = {inf, -inf};
        bool finite = true;
        for (const auto& r : csv.rows) {
            for (auto c : {ci, cm, cp, cl, cy}) finite = finite && std::isfinite(r[c]);
            max_res = std::max(max_res, r[ci]);
            min_margin = std::min(min_margin, r[cm]);
            min_pos = std::min(min_pos, r[cp]);
            max_ls = std::max(max_ls, r[cl]);
            max_y = std::max(max_y, r[cy]);
            if (!std::isnan(r[c4])) gn4[0] = std::min(gn4[0], r[c4]), gn4[1] = std::max(gn4[1], r[c4]);
            if (!std::isnan(r[c3])) gn3[0] = std::min(gn3[0], r[c3]), gn3[1] = std::max(gn3[1], r[c3]);
        }
        const double rel_margin = csv.rows.empty() ? 0.0 : min_margin / e0_vel;
        const bool identity_ok = max_res <= kChargeIdentityTolerance;
        const bool margin_ok = rel_margin >= -1e-6;

        out << std::setprecision(6);
        out << "rows                      " << csv.rows.size() << '\n'
            << "max charge residual       " << max_res << (identity_ok ? "  ok" : "  FAIL") << '\n'
            << "min velocity margin       " << rel_margin << " (relative)" << (margin_ok ? "  ok" : "  FAIL") << '\n'
            << "min positivity term       " << (csv.rows.empty() ? 0.0 : min_pos) << '\n'
            << "max log-Sobolev ratio     " << max_ls << '\n'
            << "max Y                     " << max_y << '\n';
        auto range = [&](const char* label, const double* r) {
            out << label;
            if (r[0] > r[1]) out << "n/a\n";
            else out << r[0] << " .. " << r[1] << '\n';
        };
        range("GN ratio L4               ", gn4);
        range("GN ratio L3               ", gn3);
        if (!finite) {
            err << Error(ErrorCode::Invariant, "non-finite audit values").tagged() << '\n';
            return kExitInvariant;
        }
        if (!identity_ok || !margin_ok) {
            err << Error(ErrorCode::Invariant, identity_ok ? "velocity decay margin below tolerance"
                                                           : "charge identity residual above tolerance")
                       .tagged()
                << '\n';
            return kExitInvariant;
        }
        return kExitCompleted;
    });
}

int cmd_report(const fs::path& report_path, std::ostream& out, std::ostream& err,
               std::optional<fs::path> plot_dir) {
    return guarded(err, [&] {
        const json rep = read_json(report_path);
        const int version = rep.at("format_version").get<int>();
        if (version != kReportFormatVersion)
            throw Error(ErrorCode::Io, "unsupported report format_version " + std::to_string(version));
        const fs::path dir = plot_dir ? *plot_dir : report_path.parent_path();
        if (!dir.empty()) fs::create_directories(dir);

        const auto& run = rep.at("run");
        out << "status   " << run.at("status").get<std::string>() << '\n'
            << "steps    " << run.at("steps").get<std::int64_t>() << '\n'
            << "t_final  " << as_number(run.at("t_final")) << '\n'
            << "checksum " << run.at("checksum").get<std::string>() << "\n\n";

        char line[256];
        std::snprintf(line, sizeof line, "%-12s %8s %8s %16s %16s %12s %12s\n", "criterion", "p", "q", "integral",
                      "peak", "threshold", "crossed_at");
        out << line;
        const auto& rows = rep.at("criteria");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& c = rows[i];
            const std::string kind = c.at("kind").get<std::string>();
            auto cell = [](const json& j) {
                if (j.is_null()) return std::string("-");
                const double v = as_number(j);
                if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
                char b[32];
                std::snprintf(b, sizeof b, "%.6g", v);
                return std::string(b);
            };
            std::snprintf(line, sizeof line, "%-12s %8s %8s %16s %16s %12s %12s\n", kind.c_str(),
                          cell(c.at("p")).c_str(), cell(c.at("q")).c_str(), cell(c.at("integral")).c_str(),
                          cell(c.at("peak_integrand")).c_str(), cell(c.at("threshold")).c_str(),
                          cell(c.at("crossing_time")).c_str());
            out << line;

            const fs::path plot = dir / (kind + "_" + std::to_string(i) + ".csv");
            std::ofstream f = open_output(plot);
            f << std::setprecision(17) << "t,integrand,integral\n";
            const auto& s = c.at("series");
            const auto& t = s.at("t");
            for (std::size_t k = 0; k < t.size(); ++k)
                f << as_number(t[k]) << ',' << as_number(s.at("integrand")[k]) << ','
                  << as_number(s.at("integral")[k]) << '\n';
        }
        const auto& ranking = rep.at("ranking");
        if (!ranking.empty()) {
            out << "\nranking (earliest crossing first):";
            for (const auto& r : ranking) out << ' ' << r.at("kind").get<std::string>();
            out << '\n';
        }
        const auto& a = rep.at("audit");
        out << "\naudit: max charge residual " << as_number(a.at("max_charge_residual"))
            << ", min velocity margin " << as_number(a.at("min_velocity_margin")) << ", min charge "
            << as_number(a.at("min_charge")) << (a.at("negativity_flag").get<bool>() ? " (NEGATIVE)" : "") << '\n';
        out << "wall clock " << as_number(rep.at("wall_clock").at("seconds")) << " s\n";
        return kExitCompleted;
    });
}

}  // namespace ehd
