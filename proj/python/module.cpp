// Python bindings: phqm._core
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phqm/basisops.hpp"
#include "phqm/experiment.hpp"
#include "phqm/genfun.hpp"
#include "phqm/metric.hpp"
#include "phqm/models.hpp"
#include "phqm/pathint.hpp"
#include "phqm/spectral.hpp"
#include "phqm/spectralio.hpp"
#include "phqm/verify.hpp"

namespace py = pybind11;
using namespace phqm;

namespace {

py::dict claim_dict(const ClaimRecord& c) {
    py::dict d;
    d["id"] = c.id;
    d["anchor"] = c.anchor;
    d["description"] = c.description;
    d["measured"] = c.measured;
    d["relation"] = c.relation;
    d["threshold"] = c.threshold;
    d["threshold_hi"] = c.threshold_hi;
    d["dimension"] = c.dimension;
    d["status"] = to_string(c.status);
    d["detail"] = c.detail;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "pseudo-Hermitian generating functionals in a truncated oscillator basis";
    m.attr("__version__") = kToolVersion;

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            config_error(e.what());
        } catch (const NumericalError& e) {
            numerical_error(e.what());
        } catch (const Error& e) {
            error(e.what());
        }
    });

    py::class_<BasisSpec>(m, "BasisSpec")
        .def(py::init([](int dimension, double mass, double omega, double hbar) {
                 BasisSpec b{dimension, mass, omega, hbar};
                 b.validate();
                 return b;
             }),
             py::arg("dimension"), py::arg("mass") = 1.0, py::arg("omega") = 1.0, py::arg("hbar") = 1.0)
        .def_readonly("dimension", &BasisSpec::dimension)
        .def_readonly("mass", &BasisSpec::mass)
        .def_readonly("omega", &BasisSpec::omega)
        .def_readonly("hbar", &BasisSpec::hbar)
        .def("__repr__", [](const BasisSpec& b) {
            return "BasisSpec(dimension=" + std::to_string(b.dimension) + ", mass=" + format_double(b.mass) +
                   ", omega=" + format_double(b.omega) + ", hbar=" + format_double(b.hbar) + ")";
        });

    py::class_<CubicModelSpec>(m, "CubicModel")
        .def(py::init([](double mass, double mu, double epsilon) {
                 CubicModelSpec s{mass, mu, epsilon};
                 s.validate();
                 return s;
             }),
             py::arg("mass") = 1.0, py::arg("mu") = 1.0, py::arg("epsilon") = 0.0)
        .def_readonly("mass", &CubicModelSpec::mass)
        .def_readonly("mu", &CubicModelSpec::mu)
        .def_readonly("epsilon", &CubicModelSpec::epsilon)
        .def("basis", [](const CubicModelSpec& s, int n, double hbar) { return cubic_basis(s, n, hbar); },
             py::arg("dimension"), py::arg("hbar") = 1.0)
        .def("hamiltonian",
             [](const CubicModelSpec& s, const BasisSpec& b) { return build_cubic_hamiltonian(s, b).matrix(); });

    py::class_<ShiftedModelSpec>(m, "ShiftedModel")
        .def(py::init([](std::vector<double> coefficients, double alpha, double mass, int degree_cap) {
                 ShiftedModelSpec s{std::move(coefficients), alpha, mass, degree_cap};
                 s.validate();
                 return s;
             }),
             py::arg("coefficients"), py::arg("alpha") = 0.0, py::arg("mass") = 1.0, py::arg("degree_cap") = 8)
        .def_readonly("coefficients", &ShiftedModelSpec::coefficients)
        .def_readonly("alpha", &ShiftedModelSpec::alpha)
        .def("basis", [](const ShiftedModelSpec& s, int n, double hbar) { return shifted_basis(s, n, hbar); },
             py::arg("dimension"), py::arg("hbar") = 1.0)
        .def("hamiltonian",
             [](const ShiftedModelSpec& s, const BasisSpec& b) { return build_shifted_hamiltonian(s, b).matrix(); });

    m.def("quartic_family", &quartic_family, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("mass") = 1.0);

    m.def("oscillator_ops", [](const BasisSpec& b) {
        const auto ops = oscillator_ops(b);
        return py::make_tuple(ops.x.matrix(), ops.p.matrix());
    });

    py::class_<BiorthonormalSystem>(m, "BiorthonormalSystem")
        .def_readonly("eigenvalues", &BiorthonormalSystem::eigenvalues)
        .def_readonly("right", &BiorthonormalSystem::right)
        .def_readonly("left", &BiorthonormalSystem::left)
        .def_readonly("condition_number", &BiorthonormalSystem::condition_number)
        .def("biorthonormality_residual", &biorthonormality_residual)
        .def("completeness_residual", &completeness_residual);

    m.def(
        "diagonalize",
        [](const CMatrix& h, const BasisSpec& b) { return biorthonormal_diagonalize(OperatorMatrix(h, b)); },
        py::arg("matrix"), py::arg("basis"));

    m.def(
        "metric",
        [](const BiorthonormalSystem& sys) { return metric_from_biorthonormal(sys).eta(); },
        "eta = (Psi Psi^dag)^-1 for a biorthonormal system");

    m.def(
        "run_config",
        [](const std::string& text) {
            const auto results = run_experiment(parse_config(nlohmann::json::parse(text)));
            py::list out;
            for (const auto& r : results) out.append(py::make_tuple(to_string(r.method), r.value));
            return out;
        },
        py::arg("config_json"), "Evaluate every method of a JSON config; returns [(method, Z)].");

    m.def(
        "sweep_config",
        [](const std::string& text, int workers) {
            return sweep_csv(run_sweep(parse_config(nlohmann::json::parse(text)), workers));
        },
        py::arg("config_json"), py::arg("workers") = 1, "Run a configured sweep and return the CSV text.");

    m.def(
        "path_integral_Z",
        [](double epsilon, double J, double beta, double half_width, int points, int slices) {
            return transfer_matrix_Z({{1.0, 1.0, epsilon}, J, 1.0}, {half_width, points, slices, beta}).value;
        },
        py::arg("epsilon") = 0.0, py::arg("J") = 0.0, py::arg("beta") = 1.0, py::arg("half_width") = 8.0,
        py::arg("points") = 256, py::arg("slices") = 64, "Imaginary-time transfer-matrix Z, m = mu = hbar = 1.");

    m.def(
        "fit_order",
        [](std::vector<double> eps, std::vector<double> err) {
            const auto f = fit_order(std::move(eps), std::move(err));
            return py::make_tuple(f.slope, f.half_width);
        },
        py::arg("epsilons"), py::arg("errors"), "Log-log slope and its 95% half-width.");

    m.def(
        "verify_all",
        [](const std::string& profile, bool mutate) {
            VerifyOptions o;
            o.profile = profile_from_string(profile);
            o.swap_x_for_naive = mutate;
            py::list out;
            for (const auto& c : verify_all(o).claims) out.append(claim_dict(c));
            return out;
        },
        py::arg("profile") = "quick", py::arg("mutate_swap_x") = false);
}
