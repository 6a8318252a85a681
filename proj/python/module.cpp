// Python bindings for the main operations: the Fourier lattice algebra, the
// 1D/2D lattice systems, the coupled-mode reduction and the soliton solver.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gapsol/coupled_mode.hpp"
#include "gapsol/errors.hpp"
#include "gapsol/lattice1d.hpp"
#include "gapsol/lattice2d.hpp"
#include "gapsol/soliton.hpp"

namespace py = pybind11;
using namespace gapsol;

PYBIND11_MODULE(_gapsol, m) {
    m.doc() = "Gap solitons of a periodic nonlinear Schrodinger problem: Fourier "
              "lattice system, coupled-mode reduction and pseudo-spectral solver";

    py::register_exception<NoConvergence>(m, "NoConvergence");
    py::register_exception<SingularJacobian>(m, "SingularJacobian");
    py::register_exception<BranchNotPresent>(m, "BranchNotPresent");
    py::register_exception<InvalidRegime>(m, "InvalidRegime");
    py::register_exception<DomainTooSmall>(m, "DomainTooSmall");

    py::enum_<Parity>(m, "Parity").value("Even", Parity::Even).value("Odd", Parity::Odd);

    py::class_<LatticeField1D>(m, "LatticeField1D")
        .def(py::init<Parity, int>(), py::arg("parity"), py::arg("truncation"))
        .def_property_readonly("parity", &LatticeField1D::parity)
        .def_property_readonly("truncation", &LatticeField1D::truncation)
        .def_property_readonly("max_index", &LatticeField1D::max_index)
        .def("__len__", &LatticeField1D::size)
        .def("contains", &LatticeField1D::contains)
        .def("get", &LatticeField1D::get, py::arg("m"))
        .def("set", &LatticeField1D::set, py::arg("m"), py::arg("value"))
        .def("index_at", &LatticeField1D::index_at)
        .def("indices", [](const LatticeField1D& u) {
            std::vector<int> out(u.size());
            for (int i = 0; i < u.size(); ++i) out[i] = u.index_at(i);
            return out;
        })
        .def("coefficients", [](const LatticeField1D& u) {
            return std::vector<cplx>(u.data().begin(), u.data().end());
        });

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def(py::init<>())
        .def_static("from_pairs", &PotentialSpec::from_pairs, py::arg("entries"))
        .def("w2m", &PotentialSpec::w2m, py::arg("m"))
        .def_property_readonly("truncation", &PotentialSpec::truncation)
        .def("sum_abs", &PotentialSpec::sum_abs)
        .def("eval", &PotentialSpec::eval, py::arg("x"));
    m.def("load_potential", &load_potential, py::arg("path"));
    m.def("parse_potential", &parse_potential, py::arg("json_text"));

    m.def("convolve",
          py::overload_cast<const LatticeField1D&, const LatticeField1D&>(&convolve));
    m.def("reverse_conjugate", py::overload_cast<const LatticeField1D&>(&reverse_conjugate));
    m.def("cubic_term", py::overload_cast<const LatticeField1D&>(&cubic_term));
    m.def("apply_potential",
          py::overload_cast<const PotentialSpec&, const LatticeField1D&>(&apply_potential));
    m.def("weighted_norm", py::overload_cast<const LatticeField1D&, double>(&weighted_norm),
          py::arg("u"), py::arg("s"));
    m.def("synthesize",
          [](const LatticeField1D& u, double eps, const std::vector<double>& xs) {
              return synthesize(u, eps, xs);
          });
    m.def("is_real_symmetric", &is_real_symmetric, py::arg("u"), py::arg("tol") = 1e-12);

    py::class_<LatticeProblem1D>(m, "LatticeProblem1D")
        .def(py::init<>())
        .def_readwrite("potential", &LatticeProblem1D::potential)
        .def_readwrite("omega_sq", &LatticeProblem1D::omega_sq)
        .def_readwrite("eps", &LatticeProblem1D::eps)
        .def_readwrite("sigma", &LatticeProblem1D::sigma)
        .def_readwrite("parity", &LatticeProblem1D::parity)
        .def_readwrite("trunc", &LatticeProblem1D::trunc)
        .def_readwrite("resonance_omega", &LatticeProblem1D::resonance_omega)
        .def_static("at_resonance", &LatticeProblem1D::at_resonance, py::arg("n"),
                    py::arg("omega_detuning"), py::arg("eps"), py::arg("sigma"),
                    py::arg("potential"), py::arg("trunc"));

    py::enum_<Symmetry>(m, "Symmetry")
        .value("NoSymmetry", Symmetry::None)
        .value("CosineReal", Symmetry::CosineReal)
        .value("SineImag", Symmetry::SineImag);

    py::class_<NewtonOptions>(m, "NewtonOptions")
        .def(py::init<>())
        .def_readwrite("tol", &NewtonOptions::tol)
        .def_readwrite("max_iter", &NewtonOptions::max_iter)
        .def_readwrite("symmetry", &NewtonOptions::symmetry)
        .def_readwrite("rcond_min", &NewtonOptions::rcond_min);

    m.def("residual", &residual, py::arg("u"), py::arg("problem"));
    m.def("jacobian", &jacobian, py::arg("u"), py::arg("problem"));
    m.def("newton_solve", &newton_solve, py::arg("u0"), py::arg("problem"),
          py::arg("options") = NewtonOptions{});
    m.def("solve_g", &solve_g, py::arg("a"), py::arg("b"), py::arg("problem"), py::arg("n"),
          py::arg("options") = NewtonOptions{});
    m.def("bifurcation_residual", &bifurcation_residual, py::arg("a"), py::arg("b"),
          py::arg("problem"), py::arg("n"), py::arg("options") = NewtonOptions{});
    m.def("gap_edges", &gap_edges, py::arg("n"), py::arg("eps"), py::arg("potential"));

    py::class_<BranchResult>(m, "BranchResult")
        .def_readonly("field", &BranchResult::field)
        .def_readonly("c", &BranchResult::c)
        .def_readonly("a", &BranchResult::a)
        .def_readonly("b", &BranchResult::b)
        .def_readonly("sup_deviation", &BranchResult::sup_deviation);
    m.def("periodic_branch", &periodic_branch, py::arg("n"), py::arg("omega_detuning"),
          py::arg("sigma"), py::arg("eps"), py::arg("branch"), py::arg("potential"),
          py::arg("trunc") = -1, py::arg("options") = NewtonOptions{});
    m.def("off_resonant", &off_resonant, py::arg("omega_sq"), py::arg("eps"),
          py::arg("potential"), py::arg("parity"), py::arg("trunc"));
    m.def("periodic_deviation", &periodic_deviation, py::arg("u"), py::arg("eps"), py::arg("n"),
          py::arg("a"), py::arg("b"));

    py::class_<CoupledModeParams>(m, "CoupledModeParams")
        .def(py::init([](int n, double w2n, double omega, int sigma, double eps) {
                 return CoupledModeParams{n, w2n, omega, sigma, eps};
             }),
             py::arg("n") = 1, py::arg("w2n") = 1.0, py::arg("omega") = 0.0,
             py::arg("sigma") = 1, py::arg("eps") = 0.0)
        .def_readwrite("n", &CoupledModeParams::n)
        .def_readwrite("w2n", &CoupledModeParams::w2n)
        .def_readwrite("omega", &CoupledModeParams::omega)
        .def_readwrite("sigma", &CoupledModeParams::sigma)
        .def_readwrite("eps", &CoupledModeParams::eps)
        .def("omega_sq", &CoupledModeParams::omega_sq);

    py::class_<SolitonProfile>(m, "SolitonProfile")
        .def(py::init<const CoupledModeParams&>(), py::arg("params"))
        .def_property_readonly("kappa", &SolitonProfile::kappa)
        .def("eval", &SolitonProfile::eval, py::arg("y"))
        .def("a", &SolitonProfile::a, py::arg("y"));
    m.def("soliton_exact", &soliton_exact, py::arg("params"), py::arg("y"));
    m.def("dispersion_amplitude", &dispersion_amplitude, py::arg("omega"), py::arg("w2n"),
          py::arg("sigma"), py::arg("branch"));
    m.def(
        "cme_residual",
        [](const SolitonProfile& profile, const std::vector<double>& ys, double diff_step) {
            return cme_residual(profile, ys, diff_step);
        },
        py::arg("profile"), py::arg("ys"), py::arg("diff_step") = 1e-3);
    m.def("leading_order_field",
          [](const SolitonProfile& profile, const std::vector<double>& xs) {
              return leading_order_field(profile, xs);
          });

    py::class_<DiracOperator>(m, "DiracOperator")
        .def(py::init([](const SolitonProfile& profile, const std::vector<double>& ys) {
                 return DiracOperator(profile, ys);
             }),
             py::arg("profile"), py::arg("ys"))
        .def_property_readonly("grid_size", &DiracOperator::grid_size)
        .def_property_readonly("step", &DiracOperator::step)
        .def("apply", &DiracOperator::apply, py::arg("v"))
        .def("dense", &DiracOperator::dense);
    m.def(
        "kernel_check",
        [](const DiracOperator& op, const SolitonProfile& profile,
           const std::vector<double>& ys) { return kernel_check(op, profile, ys); },
        py::arg("op"), py::arg("profile"), py::arg("ys"));
    m.def("uniform_grid", &uniform_grid, py::arg("ymax"), py::arg("h"));

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("periods", &SolverConfig::periods)
        .def_readwrite("grid_points", &SolverConfig::grid_points)
        .def_readwrite("tol", &SolverConfig::tol)
        .def_readwrite("max_iter", &SolverConfig::max_iter)
        .def_readwrite("mode_cutoff", &SolverConfig::mode_cutoff)
        .def_readwrite("omega_guard", &SolverConfig::omega_guard)
        .def_readwrite("seed_scale", &SolverConfig::seed_scale);

    py::class_<GridField>(m, "GridField")
        .def_readonly("periods", &GridField::periods)
        .def_readonly("u", &GridField::u)
        .def("__len__", &GridField::size)
        .def("step", &GridField::step)
        .def("x", &GridField::x, py::arg("j"))
        .def("sup", &GridField::sup);

    py::class_<SolitonSolveResult>(m, "SolitonSolveResult")
        .def_readonly("field", &SolitonSolveResult::field)
        .def_readonly("iterations", &SolitonSolveResult::iterations)
        .def_readonly("residual", &SolitonSolveResult::residual)
        .def_readonly("peak", &SolitonSolveResult::peak);

    py::class_<PartitionReport>(m, "PartitionReport")
        .def_readonly("mass_plus", &PartitionReport::mass_plus)
        .def_readonly("mass_minus", &PartitionReport::mass_minus)
        .def_readonly("mass_zero", &PartitionReport::mass_zero)
        .def_readonly("ratio", &PartitionReport::ratio);

    m.def("solve_soliton", &solve_soliton, py::arg("params"), py::arg("config"),
          py::arg("potential"));
    m.def("error_vs_cm", &error_vs_cm, py::arg("field"), py::arg("profile"));
    m.def("partition_diagnostic", &partition_diagnostic, py::arg("field"), py::arg("params"),
          py::arg("q") = 0.0, py::arg("window_exponent") = 2.0 / 3.0);
    m.def("residual_check", &residual_check, py::arg("field"), py::arg("params"),
          py::arg("potential"));
    m.def("seed_field", &seed_field, py::arg("params"), py::arg("config"));

    py::class_<ResonantSet2D>(m, "ResonantSet2D")
        .def_readonly("n", &ResonantSet2D::n)
        .def_readonly("parity1", &ResonantSet2D::parity1)
        .def_readonly("parity2", &ResonantSet2D::parity2)
        .def_readonly("members", &ResonantSet2D::members)
        .def_property_readonly("dim", &ResonantSet2D::dim)
        .def("index_of", &ResonantSet2D::index_of)
        .def("contains", &ResonantSet2D::contains);
    m.def("resonant_set", &resonant_set, py::arg("n"), py::arg("radius") = -1);

    py::class_<LatticeField2D>(m, "LatticeField2D")
        .def(py::init<Parity, Parity, int>(), py::arg("parity1"), py::arg("parity2"),
             py::arg("truncation"))
        .def_property_readonly("parity1", &LatticeField2D::parity1)
        .def_property_readonly("parity2", &LatticeField2D::parity2)
        .def_property_readonly("truncation", &LatticeField2D::truncation)
        .def("__len__", &LatticeField2D::size)
        .def("contains", &LatticeField2D::contains)
        .def("get", &LatticeField2D::get, py::arg("m"))
        .def("set", &LatticeField2D::set, py::arg("m"), py::arg("value"))
        .def("index_at", &LatticeField2D::index_at);

    py::class_<PotentialSpec2D>(m, "PotentialSpec2D")
        .def(py::init<>())
        .def_static("from_pairs", &PotentialSpec2D::from_pairs, py::arg("entries"))
        .def("w", &PotentialSpec2D::w, py::arg("m"))
        .def_property_readonly("truncation", &PotentialSpec2D::truncation)
        .def("sum_abs", &PotentialSpec2D::sum_abs);

    py::class_<LatticeProblem2D>(m, "LatticeProblem2D")
        .def(py::init<>())
        .def_readwrite("potential", &LatticeProblem2D::potential)
        .def_readwrite("omega_sq", &LatticeProblem2D::omega_sq)
        .def_readwrite("eps", &LatticeProblem2D::eps)
        .def_readwrite("sigma", &LatticeProblem2D::sigma)
        .def_readwrite("parity1", &LatticeProblem2D::parity1)
        .def_readwrite("parity2", &LatticeProblem2D::parity2)
        .def_readwrite("trunc", &LatticeProblem2D::trunc)
        .def_readwrite("resonance_omega", &LatticeProblem2D::resonance_omega)
        .def_static("at_resonance", &LatticeProblem2D::at_resonance, py::arg("n"),
                    py::arg("omega_detuning"), py::arg("eps"), py::arg("sigma"),
                    py::arg("potential"), py::arg("trunc"));

    m.def("residual_2d", &residual_2d, py::arg("u"), py::arg("problem"));
    m.def("jacobian_2d", &jacobian_2d, py::arg("u"), py::arg("problem"));
    m.def(
        "solve_g_2d",
        [](const std::vector<cplx>& a, const LatticeProblem2D& p, const ResonantSet2D& set,
           const NewtonOptions& opts) { return solve_g_2d(a, p, set, opts); },
        py::arg("a"), py::arg("problem"), py::arg("set"),
        py::arg("options") = NewtonOptions{});
    m.def(
        "bifurcation_residual_2d",
        [](const std::vector<cplx>& a, const LatticeProblem2D& p, const ResonantSet2D& set,
           const NewtonOptions& opts) { return bifurcation_residual_2d(a, p, set, opts); },
        py::arg("a"), py::arg("problem"), py::arg("set"),
        py::arg("options") = NewtonOptions{});
    m.def("cm4_residual", &cm4_residual, py::arg("a"), py::arg("omega_detuning"),
          py::arg("sigma"), py::arg("w22"), py::arg("w02"), py::arg("w20"), py::arg("w2m2"));

    m.attr("__version__") = "0.1.0";
}
