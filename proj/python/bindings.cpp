#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "itojump/harness.hpp"

namespace py = pybind11;
using namespace itojump;

namespace {

std::vector<std::string> render(const IndexSet& set) {
    std::vector<std::string> out;
    for (const auto& a : set) out.push_back(a.to_string());
    return out;
}

IndexSet parse_set(const std::vector<std::string>& words) {
    IndexSet set;
    for (const auto& w : words) set.insert(Multiindex::parse(w));
    return set;
}

MomentRegion parse_region(const std::string& name, double eps) {
    if (name == "small") return MomentRegion::small();
    if (name == "disc") return MomentRegion::disc(eps);
    if (name == "eps_ball") return MomentRegion::eps_ball(eps);
    if (name == "tail") return MomentRegion::tail();
    throw std::invalid_argument("region must be small, disc, eps_ball or tail");
}

StudyConfig parse_config(const std::string& text) {
    return config_from_json(nlohmann::json::parse(text));
}

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "C++ core of itojump";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("counts", [](const std::string& alpha) {
        const auto c = counts(Multiindex::parse(alpha));
        return py::dict(py::arg("s") = c.s, py::arg("w") = c.w, py::arg("n_tilde") = c.n_tilde,
                        py::arg("n") = c.n, py::arg("k") = c.k);
    });
    m.def("drop_first", [](const std::string& a) { return drop_first(Multiindex::parse(a)).to_string(); });
    m.def("drop_last", [](const std::string& a) { return drop_last(Multiindex::parse(a)).to_string(); });
    m.def("jump_digits", [](const std::string& a) { return jump_digits(Multiindex::parse(a)).to_string(); });
    m.def("ball_at", [](const std::string& a, int i) {
        return ball_at(Multiindex::parse(a), i) == Ball::small ? "small" : "tail";
    });
    m.def("hierarchical_set", [](int twice_gamma) {
        return render(hierarchical_set(StrongOrder::from_twice(twice_gamma)));
    }, py::arg("twice_gamma"), "A_gamma for gamma = twice_gamma / 2, canonical order");
    m.def("remainder_set", [](const std::vector<std::string>& a) {
        return render(remainder_set(parse_set(a)));
    });
    m.def("subscript_set", [](const std::string& a) {
        std::vector<std::string> out;
        for (const auto& w : subscript_set(Multiindex::parse(a))) out.push_back(w.to_string());
        return out;
    });

    m.def("sample_dw_dz", [](double delta, std::size_t n, std::uint64_t seed) {
        Rng rng = path_rng(seed, 0);
        std::vector<double> dw(n), dz(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto inc = sample_dw_dz(delta, rng);
            dw[i] = inc.dw;
            dz[i] = inc.dz;
        }
        return py::make_tuple(to_array(dw), to_array(dz));
    }, py::arg("delta"), py::arg("n"), py::arg("seed") = 1);

    py::class_<LevyModel>(m, "LevyModel")
        .def_static("from_json", [](const std::string& text) {
            return model_from_json(nlohmann::json::parse(text));
        })
        .def_property_readonly("finite_small_activity", &LevyModel::finite_small_activity)
        .def("moment", [](const LevyModel& model, const std::string& func, int power,
                          const std::string& region, double eps) -> py::object {
            const auto kind = func == "q" ? AmplitudeKind::q : AmplitudeKind::p;
            const auto mo = moment(model, kind, power, parse_region(region, eps));
            if (mo.divergent) return py::none();
            return py::float_(mo.value);
        }, py::arg("func"), py::arg("power"), py::arg("region"), py::arg("epsilon") = 0.0,
           "Integral of func^power against nu; None when it diverges")
        .def("mass", [](const LevyModel& model, const std::string& region, double eps) {
            return mass(model, parse_region(region, eps));
        }, py::arg("region"), py::arg("epsilon") = 0.0)
        .def("truncate", [](const LevyModel& model, double eps) {
            const auto t = truncate(model, eps);
            return py::dict(py::arg("epsilon") = t.epsilon(), py::arg("disc_mass") = t.disc_mass(),
                            py::arg("residual_l_eps") = t.residual_l_eps());
        });

    m.def("simulate", [](const std::string& config, std::size_t path_index) {
        SimulationResult r = [&] {
            py::gil_scoped_release release;
            return simulate_one(parse_config(config), path_index);
        }();
        std::vector<double> jump_times, jump_marks;
        for (const auto& e : r.path.jumps()) {
            jump_times.push_back(e.time);
            jump_marks.push_back(e.mark);
        }
        return py::dict(py::arg("time") = to_array(r.times),
                        py::arg("y_scheme") = to_array(r.scheme_values),
                        py::arg("y_oracle") = to_array(r.oracle_values),
                        py::arg("jump_times") = to_array(jump_times),
                        py::arg("jump_marks") = to_array(jump_marks));
    }, py::arg("config"), py::arg("path_index") = 0);

    m.def("converge", [](const std::string& config) {
        return report_json(strong_error_study(parse_config(config))).dump();
    }, py::arg("config"), py::call_guard<py::gil_scoped_release>());

    m.def("truncation_study", [](const std::string& config) {
        return truncation_json(truncation_study(parse_config(config))).dump();
    }, py::arg("config"), py::call_guard<py::gil_scoped_release>());
}
