#include "powermix/distribution.hpp"
#include "powermix/errors.hpp"
#include "powermix/grammar.hpp"
#include "powermix/mixture.hpp"
#include "powermix/moments.hpp"
#include "powermix/specfun.hpp"
#include "powermix/stieltjes.hpp"
#include "powermix/verifier.hpp"
#include "powermix/version.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace powermix;

namespace {

py::array_t<double> to_array(std::vector<double> v) {
    py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

py::dict report_dict(const MomentReport& r) {
    py::dict d;
    d["k"] = r.k;
    d["value"] = r.value;
    d["std_error"] = r.std_error ? py::cast(*r.std_error) : py::none();
    d["method"] = std::string(method_name(r.method));
    return d;
}

}  // namespace

PYBIND11_MODULE(_powermix, m) {
    m.doc() = "Directed power mixtures and two-sided power laws";
    m.attr("__version__") = kVersion;

    auto base = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NoFiniteMomentError>(m, "NoFiniteMomentError", base.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            PyErr_SetString(PyExc_SyntaxError, e.what());
        }
    });

    py::class_<Support>(m, "Support")
        .def_readonly("lo", &Support::lo)
        .def_readonly("hi", &Support::hi)
        .def("bounded", &Support::bounded)
        .def("__repr__", [](const Support& s) {
            return "Support(" + std::to_string(s.lo) + ", " + std::to_string(s.hi) + ")";
        });

    py::class_<Distribution>(m, "Distribution")
        .def_static("uniform", &Distribution::uniform, py::arg("a"), py::arg("b"))
        .def_static("arcsin", &Distribution::arcsin, py::arg("a"), py::arg("b"))
        .def_static("semicircle", &Distribution::semicircle, py::arg("a"), py::arg("b"))
        .def_static("power_semicircle", &Distribution::power_semicircle, py::arg("a"), py::arg("b"))
        .def_static("beta", &Distribution::beta, py::arg("alpha"), py::arg("beta"))
        .def_static("power", &Distribution::power, py::arg("n"))
        .def_static("triangular", &Distribution::triangular, py::arg("lo"), py::arg("mode"), py::arg("hi"))
        .def_static("cauchy", &Distribution::cauchy, py::arg("location"), py::arg("scale"))
        .def_static("normal", &Distribution::normal, py::arg("mean"), py::arg("sd"))
        .def_static("point_mass", &Distribution::point_mass, py::arg("c"))
        .def_property_readonly("kind", [](const Distribution& d) { return std::string(kind_name(d.kind())); })
        .def_property_readonly("params", &Distribution::params)
        .def("support", &Distribution::support)
        .def("pdf", py::vectorize(&Distribution::pdf))
        .def("cdf", py::vectorize(&Distribution::cdf))
        .def("quantile", py::vectorize(&Distribution::quantile))
        .def("raw_moment", &Distribution::raw_moment)
        .def("mean", &Distribution::mean)
        .def("variance", &Distribution::variance)
        .def("shifted", &Distribution::shifted)
        .def("sample", [](const Distribution& d, std::size_t n, std::uint64_t seed) {
                 Stream s = Stream(seed).split(fnv1a("sample"));
                 return to_array(d.sample(s, n));
             }, py::arg("n"), py::arg("seed") = 42)
        .def("stieltjes", [](const Distribution& d, std::complex<double> z, int order) {
                 return stieltjes(d, z, order);
             }, py::arg("z"), py::arg("order") = 0)
        .def("__eq__", [](const Distribution& a, const Distribution& b) { return a == b; })
        .def("__repr__", &Distribution::to_string);

    py::class_<MixtureSpec>(m, "MixtureSpec")
        .def_static("directed", &MixtureSpec::directed, py::arg("n"), py::arg("x1"), py::arg("x2"))
        .def_static("tsp", &MixtureSpec::tsp, py::arg("n"), py::arg("x1"), py::arg("x2"))
        .def_static("tsp_weighted", &MixtureSpec::tsp_weighted, py::arg("weight"), py::arg("x1"), py::arg("x2"))
        .def_property_readonly("family", [](const MixtureSpec& s) { return std::string(family_name(s.family())); })
        .def_property_readonly("x1", &MixtureSpec::x1)
        .def_property_readonly("x2", &MixtureSpec::x2)
        .def_property_readonly("weight", &MixtureSpec::weight)
        .def_property_readonly("power_index", &MixtureSpec::power_index)
        .def("shifted", &MixtureSpec::shifted)
        .def("support", [](const MixtureSpec& s) { return mixture_support(s); })
        .def("sample", [](const MixtureSpec& s, std::size_t n, std::uint64_t seed) {
                 std::vector<double> x;
                 {
                     py::gil_scoped_release nogil;
                     x = chunked_sample(s, n, seed, fnv1a("sample"));
                 }
                 return to_array(std::move(x));
             }, py::arg("n"), py::arg("seed") = 42)
        .def("pdf", [](const MixtureSpec& s, double z) { return mixture_pdf_numeric(s, z); }, py::arg("z"))
        .def("stieltjes", [](const MixtureSpec& s, std::complex<double> z, int order) {
                 return mixture_stieltjes(s, z, order);
             }, py::arg("z"), py::arg("order") = 0)
        .def("__eq__", [](const MixtureSpec& a, const MixtureSpec& b) { return a == b; })
        .def("__repr__", &MixtureSpec::to_string);

    m.def("parse", [](const std::string& text) -> py::object {
        const AnySpec s = parse_spec(text);
        if (const auto* d = std::get_if<Distribution>(&s)) return py::cast(*d);
        return py::cast(std::get<MixtureSpec>(s));
    }, py::arg("text"));

    m.def("tsp_pdf_uniform", py::vectorize(&tsp_pdf_uniform), py::arg("n"), py::arg("z"));
    m.def("tsp_pdf_uniform_betaweight", py::vectorize(&tsp_pdf_uniform_betaweight),
          py::arg("n"), py::arg("m"), py::arg("z"));
    m.def("conditional_cdf", [](double x1, double x2, const std::string& family, double n, double z) {
        const Family f = family == "directed" ? Family::directed : Family::undirected;
        return conditional_cdf({x1, x2, f, n}, z);
    }, py::arg("x1"), py::arg("x2"), py::arg("family"), py::arg("n"), py::arg("z"));

    // moments
    m.def("moments", [](const MixtureSpec& s, int k_max, const std::string& method, std::size_t n,
                        std::uint64_t seed) {
        py::list out;
        if (method == "mc") {
            for (const auto& r : moments_monte_carlo(s, k_max, n, seed)) {
                if (r.k > 0) out.append(report_dict(r));
            }
            return out;
        }
        const auto idx = s.power_index();
        if (method == "b") {
            const auto jm = joint_moments(s.x1(), s.x2(), k_max);
            for (int k = 1; k <= k_max; ++k) out.append(report_dict(moment_thm_b(s, k, jm)));
            return out;
        }
        if (method != "a" && method != "c") throw PreconditionError("method must be a, b, c or mc");
        if (!idx || s.family() != Family::undirected) {
            throw PreconditionError("methods a and c need a tsp spec with a power(n) weight");
        }
        const auto os = order_stat_moments(s.x1(), s.x2(), k_max);
        for (int k = 1; k <= k_max; ++k) {
            out.append(report_dict(method == "a" ? moment_thm_a(os, *idx, k) : moment_thm_c(os, *idx, k)));
        }
        return out;
    }, py::arg("spec"), py::arg("k_max"), py::arg("method") = "a", py::arg("n") = 1000000,
       py::arg("seed") = 42);
    m.def("uniform_moment_formula", &uniform_moment_formula, py::arg("n"), py::arg("k"));
    m.def("normal_moment_formula", &normal_moment_formula, py::arg("n"), py::arg("k"));

    // identities
    m.def("partial_fraction_residual", &partial_fraction_residual,
          py::arg("x1"), py::arg("x2"), py::arg("z"), py::arg("n"));
    m.def("directed_transform_residual", &directed_transform_residual,
          py::arg("spec"), py::arg("z"), py::arg("claimed") = std::optional<Distribution>{});
    m.def("iid_square_residual", &iid_square_residual,
          py::arg("x"), py::arg("z"), py::arg("claimed") = std::optional<Distribution>{});
    m.def("double_stieltjes", &double_stieltjes, py::arg("x1"), py::arg("x2"), py::arg("z"));
    m.def("ordered_pair_transform", &ordered_pair_transform, py::arg("x1"), py::arg("x2"), py::arg("z"));
    m.def("tsp_third_derivative_residual", &tsp_third_derivative_residual,
          py::arg("x1"), py::arg("x2"), py::arg("z"));
    m.def("tsp_third_derivative_residual_corrected", &tsp_third_derivative_residual_corrected,
          py::arg("x1"), py::arg("x2"), py::arg("z"));

    // verifier
    m.def("scenario_ids", &scenario_ids);
    m.def("verify", [](const std::string& id, std::size_t n, std::uint64_t seed) {
        const auto s = find_scenario(id, n, seed);
        if (!s) throw py::key_error("unknown scenario id '" + id + "'");
        VerificationReport r;
        {
            py::gil_scoped_release nogil;
            r = run_scenario(*s);
        }
        py::dict d;
        d["id"] = r.id;
        d["check"] = std::string(check_name(r.check));
        d["statistic"] = r.statistic;
        d["threshold"] = r.threshold;
        d["pass"] = r.pass;
        d["n"] = r.n;
        d["seed"] = r.seed;
        d["wall_time"] = r.wall_time;
        d["detail"] = r.detail;
        return d;
    }, py::arg("id"), py::arg("n") = 1000000, py::arg("seed") = 42);
    m.def("ks_statistic", &ks_statistic, py::arg("samples"), py::arg("cdf"));

    // special functions
    auto sf = m.def_submodule("specfun");
    sf.def("log_gamma", py::vectorize(&specfun::log_gamma));
    sf.def("log_beta", py::vectorize(&specfun::log_beta));
    sf.def("incomplete_beta", py::vectorize(&specfun::incomplete_beta), py::arg("x"), py::arg("a"), py::arg("b"));
    sf.def("hyp2f1_1_n", py::vectorize(&specfun::hyp2f1_1_n), py::arg("n"), py::arg("z"));
    sf.def("euler_hyp2f1", [](double a, double b, double c, double z) {
        return specfun::euler_hyp2f1({a, b, c, z});
    }, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"));
}
