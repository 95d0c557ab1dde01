#include "ehd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ehd/checkpoint.hpp"
#include "ehd/error.hpp"
#include "ehd/random.hpp"
#include "ehd/spectral.hpp"

namespace ehd {

const char* to_string(Preset p) noexcept {
    switch (p) {
        case Preset::TaylorGreen: return "taylor_green";
        case Preset::ChargedShear: return "charged_shear";
        case Preset::RandomSmooth: return "random_smooth";
        case Preset::FromCheckpoint: return "from_checkpoint";
    }
    return "?";
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
    s = trim(s);
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

struct Entry {
    std::string value;
    int line;
};

const char* const kKnownKeys[] = {"grid_n",      "t_end",      "cfl",         "dt",
                                  "dt_min",      "initial_condition", "criteria", "output_dir",
                                  "series_csv",  "audit_csv",  "report_json", "checkpoint_every"};

}  // namespace

RunConfig parse_config(std::string_view text) {
    std::vector<std::string> errors;
    std::map<std::string, Entry> entries;

    int line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        auto line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        bool known = false;
        for (const char* k : kKnownKeys) known = known || key == k;
        if (!known) {
            errors.push_back("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            continue;
        }
        if (auto it = entries.find(key); it != entries.end()) {
            errors.push_back("duplicate key '" + key + "' on lines " + std::to_string(it->second.line) +
                             " and " + std::to_string(line_no));
            continue;
        }
        entries.emplace(key, Entry{value, line_no});
    }

    RunConfig cfg;
    auto where = [&](const std::string& key) {
        return "line " + std::to_string(entries.at(key).line) + ": ";
    };
    auto number = [&](const std::string& key, double& out) {
        if (!entries.contains(key)) return false;
        if (auto v = parse_number(entries.at(key).value)) {
            out = *v;
            return true;
        }
        errors.push_back(where(key) + key + " must be a number (got '" + entries.at(key).value + "')");
        return false;
    };

    if (entries.contains("grid_n")) {
        const auto v = parse_int(entries.at("grid_n").value);
        if (!v || *v < 8 || (*v & (*v - 1)) != 0 || *v > 1024)
            errors.push_back(where("grid_n") + "grid_n must be a power of two in [8, 1024]");
        else
            cfg.grid_n = static_cast<int>(*v);
    }
    if (!entries.contains("t_end"))
        errors.push_back("missing required key 't_end'");
    else if (number("t_end", cfg.t_end) && !(cfg.t_end > 0.0 && std::isfinite(cfg.t_end)))
        errors.push_back(where("t_end") + "t_end must be > 0");
    if (number("cfl", cfg.cfl) && !(cfg.cfl > 0.0 && cfg.cfl < 1.0))
        errors.push_back(where("cfl") + "cfl must satisfy 0 < cfl < 1");
    if (number("dt", cfg.dt) && !(cfg.dt > 0.0 && std::isfinite(cfg.dt)))
        errors.push_back(where("dt") + "dt must be > 0");
    if (number("dt_min", cfg.dt_min) && !(cfg.dt_min > 0.0))
        errors.push_back(where("dt_min") + "dt_min must be > 0");
    if (cfg.dt_min > cfg.dt) errors.push_back("dt_min must not exceed dt");

    if (!entries.contains("initial_condition")) {
        errors.push_back("missing required key 'initial_condition'");
    } else {
        const std::string_view v = entries.at("initial_condition").value;
        const auto open = v.find('(');
        const std::string_view name = trim(v.substr(0, open));
        std::vector<std::string_view> args;
        if (open != std::string_view::npos) {
            const auto close = v.rfind(')');
            if (close == std::string_view::npos || close < open || !trim(v.substr(close + 1)).empty())
                errors.push_back(where("initial_condition") + "unbalanced parentheses");
            else if (!trim(v.substr(open + 1, close - open - 1)).empty())
                args = split(v.substr(open + 1, close - open - 1), ',');
        }
        auto& ic = cfg.initial;
        if (name == "taylor_green" || name == "charged_shear") {
            ic.preset = name == "taylor_green" ? Preset::TaylorGreen : Preset::ChargedShear;
            if (!args.empty()) errors.push_back(where("initial_condition") + std::string(name) + " takes no arguments");
        } else if (name == "random_smooth") {
            ic.preset = Preset::RandomSmooth;
            if (args.size() != 3) {
                errors.push_back(where("initial_condition") +
                                 "random_smooth expects (seed, energy, peak_wavenumber)");
            } else {
                const auto seed = parse_int(args[0]);
                const auto energy = parse_number(args[1]);
                const auto peak = parse_number(args[2]);
                if (!seed || *seed < 0) errors.push_back(where("initial_condition") + "seed must be a non-negative integer");
                else ic.seed = static_cast<std::uint64_t>(*seed);
                if (!energy || !(*energy >= 0.0) || std::isinf(*energy))
                    errors.push_back(where("initial_condition") + "energy must be a finite number >= 0");
                else ic.energy = *energy;
                if (!peak || !(*peak > 0.0) || std::isinf(*peak))
                    errors.push_back(where("initial_condition") + "peak_wavenumber must be > 0");
                else ic.peak_wavenumber = *peak;
            }
        } else if (name == "from_checkpoint") {
            ic.preset = Preset::FromCheckpoint;
            if (args.size() != 1 || args[0].empty())
                errors.push_back(where("initial_condition") + "from_checkpoint expects (path)");
            else
                ic.checkpoint = std::string(args[0]);
        } else {
            errors.push_back(where("initial_condition") + "unknown initial condition '" + std::string(name) + "'");
        }
    }

    if (entries.contains("criteria")) {
        int idx = 0;
        for (auto item : split(entries.at("criteria").value, ',')) {
            ++idx;
            std::vector<std::string_view> parts;
            for (auto tok : split(item, ' '))
                if (!tok.empty()) parts.push_back(tok);
            const std::string ctx = where("criteria") + "criterion " + std::to_string(idx) + ": ";
            if (parts.size() != 3) {
                errors.push_back(ctx + "expected 'KIND p threshold' (got '" + std::string(item) + "')");
                continue;
            }
            const auto kind = parse_criterion_kind(parts[0]);
            const auto p = parse_number(parts[1]);
            std::optional<double> threshold;
            bool ok = true;
            if (!kind) {
                errors.push_back(ctx + "unknown kind '" + std::string(parts[0]) +
                                 "' (BKM, PS_u, PS_grad_u, BESOV_ANISO)");
                ok = false;
            }
            if (!p) {
                errors.push_back(ctx + "p must be a number or inf");
                ok = false;
            }
            if (parts[2] != "auto") {
                threshold = parse_number(parts[2]);
                if (!threshold || !(*threshold >= 0.0)) {
                    errors.push_back(ctx + "threshold must be a number >= 0 or 'auto'");
                    ok = false;
                }
            }
            if (!ok) continue;
            try {
                make_accumulator(*kind, *p, threshold);
                cfg.criteria.push_back({*kind, *p, threshold});
            } catch (const Error& e) {
                errors.push_back(ctx + e.what());
            }
        }
    } else {
        cfg.criteria = {{CriterionKind::Bkm, kInf, std::nullopt},
                        {CriterionKind::PsU, kInf, std::nullopt},
                        {CriterionKind::PsGradU, kInf, std::nullopt},
                        {CriterionKind::BesovAniso, kInf, std::nullopt}};
    }

    for (const char* key : {"output_dir", "series_csv", "audit_csv", "report_json"}) {
        if (!entries.contains(key)) continue;
        const std::string& v = entries.at(key).value;
        if (v.empty()) {
            errors.push_back(where(key) + std::string(key) + " must not be empty");
            continue;
        }
        if (std::string_view(key) == "output_dir") cfg.output_dir = v;
        else if (std::string_view(key) == "series_csv") cfg.series_csv = v;
        else if (std::string_view(key) == "audit_csv") cfg.audit_csv = v;
        else cfg.report_json = v;
    }
    if (entries.contains("checkpoint_every")) {
        const auto v = parse_int(entries.at("checkpoint_every").value);
        if (!v || *v < 0) errors.push_back(where("checkpoint_every") + "checkpoint_every must be an integer >= 0");
        else cfg.checkpoint_every = static_cast<int>(*v);
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

VectorField taylor_green(const Grid& g, double t) {
    const double decay = std::exp(-2.0 * t);
    return {{RealField::sample(g, [&](double x, double y, double) { return std::sin(x) * std::cos(y) * decay; }),
             RealField::sample(g, [&](double x, double y, double) { return -std::cos(x) * std::sin(y) * decay; }),
             RealField(g)}};
}

State charged_shear(const Grid& g) {
    State s = State::zeros(g);
    s.v = RealField::sample(g, [](double x, double, double) { return 1.0 + 0.5 * std::sin(x); });
    s.w = RealField::sample(g, [](double, double y, double) { return 1.0 + 0.5 * std::sin(y); });
    return s;
}

State initial_state(const RunConfig& cfg) {
    const auto& ic = cfg.initial;
    State s = [&] {
        if (ic.preset == Preset::FromCheckpoint) return read_checkpoint(ic.checkpoint);
        const Grid g(cfg.grid_n);
        switch (ic.preset) {
            case Preset::TaylorGreen: {
                State st = State::zeros(g);
                st.u = taylor_green(g);
                return st;
            }
            case Preset::ChargedShear: return charged_shear(g);
            default: break;
        }
        // random_smooth: solenoidal velocity, charges 1 + bounded mean-free perturbations.
        State st = State::zeros(g);
        st.u = backward_transform(random_solenoidal_field(g, ic.seed, ic.energy, ic.peak_wavenumber));
        for (int c = 0; c < 2; ++c) {
            CounterRng rng(ic.seed, 2 + c);
            const RealField pert = backward_transform(random_spectral_field(g, rng, ic.peak_wavenumber));
            const double scale = pert.max_abs() > 0.0 ? 0.5 / pert.max_abs() : 0.0;
            RealField charge(g);
            for (std::size_t i = 0; i < charge.size(); ++i) charge[i] = 1.0 + scale * pert[i];
            (c == 0 ? st.v : st.w) = std::move(charge);
        }
        return st;
    }();
    if (all_finite(s)) {
        const double net = (forward_transform(s.v) - forward_transform(s.w)).mean().real();
        if (std::abs(net) > kNeutralityTolerance) {
            std::ostringstream msg;
            msg << to_string(ic.preset) << ": initial charges are not neutral (mean(v - w) = " << net << ")";
            throw ConfigError({msg.str()});
        }
    }
    return s;
}

}  // namespace ehd
