// Python surface: numpy in/out. Real arrays are (n, n, n) indexed [i1, i2, i3]
// along x1, x2, x3 (Fortran order, matching the core's x-fastest storage).
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <cstring>

#include "ehd/app.hpp"
#include "ehd/checkpoint.hpp"
#include "ehd/config.hpp"
#include "ehd/criteria.hpp"
#include "ehd/error.hpp"
#include "ehd/littlewood_paley.hpp"
#include "ehd/solver.hpp"
#include "ehd/spectral.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

using Array = py::array_t<double, py::array::f_style | py::array::forcecast>;

ehd::RealField to_field(const Array& a) {
    if (a.ndim() != 3 || a.shape(0) != a.shape(1) || a.shape(1) != a.shape(2))
        throw ehd::Error(ehd::ErrorCode::Domain, "expected an (n, n, n) array");
    const ehd::Grid g(static_cast<int>(a.shape(0)));
    return ehd::RealField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const ehd::RealField& f) {
    const auto n = static_cast<py::ssize_t>(f.grid().n());
    Array out({n, n, n});
    std::memcpy(out.mutable_data(), f.samples().data(), f.size() * sizeof(double));
    return out;
}

ehd::VectorField to_vector(const std::vector<Array>& u) {
    if (u.size() != 3) throw ehd::Error(ehd::ErrorCode::Domain, "expected three velocity components");
    return {to_field(u[0]), to_field(u[1]), to_field(u[2])};
}

py::tuple to_tuple(const ehd::VectorField& u) { return py::make_tuple(to_array(u[0]), to_array(u[1]), to_array(u[2])); }

ehd::CriterionKind kind_of(const std::string& name) {
    const auto k = ehd::parse_criterion_kind(name);
    if (!k) throw ehd::Error(ehd::ErrorCode::Domain, "unknown criterion '" + name + "'");
    return *k;
}

py::dict state_dict(const ehd::State& s) {
    return py::dict("u"_a = to_tuple(s.u), "v"_a = to_array(s.v), "w"_a = to_array(s.w), "t"_a = s.t,
                    "step_index"_a = s.step_index);
}

ehd::State state_from(const py::dict& d) {
    ehd::State s{to_vector(d["u"].cast<std::vector<Array>>()), to_field(d["v"].cast<Array>()),
                 to_field(d["w"].cast<Array>())};
    s.t = d.contains("t") ? d["t"].cast<double>() : 0.0;
    s.step_index = d.contains("step_index") ? d["step_index"].cast<std::int64_t>() : 0;
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pseudo-spectral electrohydrodynamics on the periodic torus";

    static py::exception<ehd::Error> error(m, "EhdError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ehd::Error& e) {
            PyErr_SetString(error.ptr(), e.tagged().c_str());
        }
    });

    m.attr("REPORT_FORMAT_VERSION") = ehd::kReportFormatVersion;
    m.def("set_max_threads", &ehd::set_max_threads, "threads"_a);

    m.def("nodes", [](int n) {
        const ehd::Grid g(n);
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = g.node(i);
        return x;
    }, "n"_a, "Grid nodes 2 pi i / n along one axis.");

    m.def("lp_norm", [](const Array& f, double p) { return ehd::lp_norm(to_field(f), p); }, "f"_a, "p"_a);
    m.def("sobolev_norm", [](const Array& f, double s) { return ehd::sobolev_norm(ehd::forward_transform(to_field(f)), s); },
          "f"_a, "s"_a);
    m.def("tail_fraction", [](const Array& f) { return ehd::spectral_tail_fraction(ehd::forward_transform(to_field(f))); },
          "f"_a);
    m.def("dealias", [](const Array& f) { return to_array(ehd::backward_transform(ehd::forward_transform(to_field(f)))); },
          "f"_a, "Applies the 2/3 mask.");
    m.def("leray_project", [](const std::vector<Array>& u) {
        return to_tuple(ehd::backward_transform(ehd::leray_project(ehd::forward_transform(to_vector(u)))));
    }, "u"_a);
    m.def("max_divergence", [](const std::vector<Array>& u) { return ehd::max_divergence(to_vector(u)); }, "u"_a);
    m.def("solve_poisson", [](const Array& eta) {
        return to_array(ehd::backward_transform(ehd::solve_poisson(ehd::forward_transform(to_field(eta)))));
    }, "eta"_a, "Mean-free psi with Laplacian psi = eta.");

    m.def("band_weight", &ehd::band_weight, "j"_a, "r"_a);
    m.def("band_range", [](int n) {
        const auto br = ehd::band_range(ehd::Grid(n));
        return py::make_tuple(br.j_min, br.j_max);
    }, "n"_a);
    m.def("band", [](const Array& f, int j) {
        return to_array(ehd::backward_transform(ehd::band(ehd::forward_transform(to_field(f)), j)));
    }, "f"_a, "j"_a, "Littlewood-Paley block Delta_j f.");
    m.def("besov_norm", [](const Array& f, double s, double p, double r) {
        return ehd::besov_norm(ehd::forward_transform(to_field(f)), {.s = s, .p = p, .r = r});
    }, "f"_a, "s"_a = 0.0, "p"_a = 2.0, "r"_a = 2.0);

    m.def("criterion_exponents", [](const std::string& kind, double p) {
        const auto a = ehd::make_accumulator(kind_of(kind), p);
        py::dict d("p"_a = a.p, "q"_a = a.q, "target"_a = a.target, "scaling_defect"_a = ehd::scaling_defect(a));
        if (a.kind == ehd::CriterionKind::BesovAniso) d["r"] = a.r;
        return d;
    }, "kind"_a, "p"_a);

    m.def("taylor_green", [](int n, double t) {
        const ehd::Grid g(n);
        ehd::State s = ehd::State::zeros(g);
        s.u = ehd::taylor_green(g, t);
        s.t = t;
        return state_dict(s);
    }, "n"_a, "t"_a = 0.0);
    m.def("charged_shear", [](int n) { return state_dict(ehd::charged_shear(ehd::Grid(n))); }, "n"_a);
    m.def("advance", [](const py::dict& state, double dt, int steps) {
        ehd::State s = state_from(state);
        for (int i = 0; i < steps; ++i) s = ehd::advance(s, dt);
        return state_dict(s);
    }, "state"_a, "dt"_a, "steps"_a = 1, "Fixed-step integration without observers.");

    m.def("read_checkpoint", [](const std::filesystem::path& p) { return state_dict(ehd::read_checkpoint(p)); }, "path"_a);
    m.def("write_checkpoint", [](const std::filesystem::path& p, const py::dict& state) {
        ehd::write_checkpoint(p, state_from(state));
    }, "path"_a, "state"_a);

    m.def("validate_config", [](const std::string& text) {
        const ehd::RunConfig cfg = ehd::parse_config(text);
        return py::dict("grid_n"_a = cfg.grid_n, "t_end"_a = cfg.t_end, "output_dir"_a = cfg.output_dir.string(),
                        "initial_condition"_a = ehd::to_string(cfg.initial.preset),
                        "criteria"_a = cfg.criteria.size());
    }, "text"_a, "Parses a run configuration; raises EhdError listing every violation.");
    m.def("run", [](const std::string& text) {
        const ehd::RunConfig cfg = ehd::parse_config(text);
        std::string doc;
        {
            py::gil_scoped_release release;
            doc = ehd::render_report(cfg, ehd::execute(cfg));
        }
        return py::module_::import("json").attr("loads")(doc);
    }, "config"_a, "Runs a configuration and returns the report document.");
}
