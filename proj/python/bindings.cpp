#include "zndstab/errors.hpp"
#include "zndstab/evans1d.hpp"
#include "zndstab/hifreq.hpp"
#include "zndstab/io.hpp"
#include "zndstab/multid.hpp"
#include "zndstab/oscint.hpp"
#include "zndstab/profile.hpp"
#include "zndstab/riccati.hpp"
#include "zndstab/stability.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace znd;

namespace {

py::dict profile_dict(const ZNDProfile& prof)
{
    std::vector<double> x, tau, u, e, z, p, T;
    for (const auto& g : prof.grid()) {
        x.push_back(g.x);
        tau.push_back(g.tau);
        u.push_back(g.u);
        e.push_back(g.e);
        z.push_back(g.z);
        p.push_back(g.p);
        T.push_back(g.T);
    }
    py::dict d;
    d["x"] = x;
    d["tau"] = tau;
    d["u"] = u;
    d["e"] = e;
    d["z"] = z;
    d["p"] = p;
    d["T"] = T;
    d["half_reaction_length"] = prof.half_reaction_length();
    d["domain_length"] = prof.domain_length();
    const auto rh = prof.rankine_hugoniot_residual();
    d["rankine_hugoniot_residual"] = std::vector<double>(rh.begin(), rh.end());
    return d;
}

}  // namespace

PYBIND11_MODULE(_zndstab, m)
{
    m.doc() = "ZND detonation stability: profiles, Evans-Lopatinski determinants, high-frequency tools";
    m.attr("__version__") = io::kVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<ChemParams>(m, "ChemParams")
        .def(py::init<>())
        .def(py::init([](double gamma, double e_plus, double heat_release, double activation, double rate,
                         double specific_heat) {
                 ChemParams p;
                 p.gamma = gamma;
                 p.e_plus = e_plus;
                 p.heat_release = heat_release;
                 p.activation = activation;
                 p.rate = rate;
                 p.specific_heat = specific_heat;
                 p.validate();
                 return p;
             }),
             py::arg("gamma") = 0.2, py::arg("e_plus") = 0.0, py::arg("heat_release") = 0.0,
             py::arg("activation") = 0.0, py::arg("rate") = 1.0, py::arg("specific_heat") = 1.0)
        .def_readwrite("gamma", &ChemParams::gamma)
        .def_readwrite("e_plus", &ChemParams::e_plus)
        .def_readwrite("heat_release", &ChemParams::heat_release)
        .def_readwrite("activation", &ChemParams::activation)
        .def_readwrite("rate", &ChemParams::rate)
        .def_readwrite("specific_heat", &ChemParams::specific_heat)
        .def("validate", &ChemParams::validate)
        .def("__repr__", [](const ChemParams& p) {
            return "ChemParams(gamma=" + io::format_double(p.gamma) + ", e_plus=" + io::format_double(p.e_plus) +
                   ", heat_release=" + io::format_double(p.heat_release) + ", activation=" +
                   io::format_double(p.activation) + ", rate=" + io::format_double(p.rate) + ")";
        });

    m.def("q_cj", &q_cj, py::arg("gamma"), py::arg("e_plus"));
    m.def(
        "algebraic_state",
        [](double z, const ChemParams& p) {
            const GasState s = algebraic_state(z, p);
            return py::make_tuple(s.tau, s.u, s.e);
        },
        py::arg("z"), py::arg("params"), "(tau, u, e) at reaction progress z");
    m.def("reaction_rhs", &reaction_rhs, py::arg("z"), py::arg("params"));
    m.def("with_half_reaction_length", &with_half_reaction_length, py::arg("params"), py::arg("length") = 1.0);
    m.def(
        "from_classical",
        [](double overdrive, double activation_classical, double heat_classical, double gamma) {
            ScalingClassical c{overdrive, activation_classical, heat_classical, gamma};
            return from_classical_scaling(c);
        },
        py::arg("overdrive"), py::arg("activation_classical"), py::arg("heat_classical"), py::arg("gamma") = 0.2);
    m.def(
        "profile",
        [](const ChemParams& p, double z_min, int points) { return profile_dict(ZNDProfile(p, z_min, GridControl{points})); },
        py::arg("params"), py::arg("z_min") = 1e-8, py::arg("points") = 401);

    m.def(
        "evans1d",
        [](const ChemParams& p, const std::vector<cplx>& lambdas, double z_min) {
            const ZNDProfile prof(p, z_min);
            py::gil_scoped_release nogil;
            const Evans1D D(prof);
            std::vector<std::pair<double, double>> out;
            for (cplx l : lambdas) {
                const EvansValue v = D(l);
                out.emplace_back(v.log_magnitude, v.phase);
            }
            return out;
        },
        py::arg("params"), py::arg("lambdas"), py::arg("z_min") = 1e-8,
        "(log|D|, phase) per lambda; the value is exp(log|D| + i phase)");
    m.def(
        "evans_multid",
        [](const ChemParams& p, const std::vector<cplx>& lambdas, double xi, double z_min) {
            const MultiDProfile prof(p, z_min);
            py::gil_scoped_release nogil;
            const EvansMultiD D(prof);
            std::vector<std::pair<double, double>> out;
            for (cplx l : lambdas) {
                const EvansValue v = D(l, xi);
                out.emplace_back(v.log_magnitude, v.phase);
            }
            return out;
        },
        py::arg("params"), py::arg("lambdas"), py::arg("xi"), py::arg("z_min") = 1e-8);

    m.def(
        "verdict",
        [](const ChemParams& p, double radius, bool confirm_doubling, bool unit_half_length) {
            VerdictControl c;
            c.radius = radius;
            c.confirm_doubling = confirm_doubling;
            c.unit_half_length = unit_half_length;
            VerdictReport r;
            {
                py::gil_scoped_release nogil;
                r = verdict(p, c);
            }
            py::dict d;
            d["verdict"] = to_string(r.verdict);
            d["count"] = r.count;
            d["count_doubled"] = r.count_doubled;
            d["radius"] = r.radius;
            d["rate_used"] = r.rate_used;
            d["evaluations"] = r.evaluations;
            return d;
        },
        py::arg("params"), py::arg("radius") = 10.0, py::arg("confirm_doubling") = true,
        py::arg("unit_half_length") = true);

    m.def(
        "symbol_eigs",
        [](const ChemParams& p, double x, cplx zeta) {
            const MultiDProfile prof(p, 1e-8);
            const SymbolPoint s = symbol_eigs(x, zeta, prof);
            return std::vector<cplx>(s.mu.begin(), s.mu.end());
        },
        py::arg("params"), py::arg("x"), py::arg("zeta"));
    m.def(
        "detonation_type",
        [](const ChemParams& p) { return to_string(classify_type(MultiDProfile(p, 1e-8))); }, py::arg("params"));
    m.def(
        "hf_ratio",
        [](const ChemParams& p, cplx zeta, const std::vector<double>& h_grid) {
            const MultiDProfile prof(p, 1e-8);
            HfReport r;
            {
                py::gil_scoped_release nogil;
                r = hf_ratio(zeta, h_grid, prof);
            }
            std::vector<double> dev;
            for (const auto& row : r.rows) dev.push_back(row.deviation);
            py::dict d;
            d["deviation"] = dev;
            d["order"] = r.order;
            d["monotone"] = r.monotone;
            return d;
        },
        py::arg("params"), py::arg("zeta"), py::arg("h_grid"));

    m.def(
        "osc_integral",
        [](double lo, double hi, double h, std::function<cplx(cplx)> a) {
            const Symbol s = a ? Symbol::analytic(a) : Symbol::constant(1.0);
            const OscResult r = osc_integral_ab(s, lo, hi, h);
            return py::make_tuple(r.log_abs, r.arg, r.precision_warning);
        },
        py::arg("lo"), py::arg("hi"), py::arg("h"), py::arg("symbol") = nullptr,
        "(log|I|, arg I, precision_warning) for int_lo^hi exp(-(y^2 + 2iy)/h) a(y) dy; a entire");
    m.def(
        "gevrey_beta",
        [](double s, double x) { return gevrey_decay_check(s, x).beta; }, py::arg("s"), py::arg("x") = 2.0);
    m.def(
        "conjugator_verdict",
        [](double L, int h_from, int h_to, int nx) {
            return to_string(conjugator_verdict(Symbol::constant(1.0), L, dyadic_h_grid(h_from, h_to), nx).verdict);
        },
        py::arg("L"), py::arg("h_from") = 4, py::arg("h_to") = 10, py::arg("nx") = 200);
    m.def(
        "riccati_order",
        [](const std::vector<double>& h_grid, int iterations, int nodes) {
            const RiccatiOrderReport r = riccati_order_study(synthetic_blocks(), h_grid, iterations, nodes);
            py::dict d;
            d["order"] = r.order;
            d["gain"] = r.gain;
            d["residual"] = r.residual;
            return d;
        },
        py::arg("h_grid"), py::arg("iterations") = 3, py::arg("nodes") = 48);
}
