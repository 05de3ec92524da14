#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sftlab/burton_steif.hpp"
#include "sftlab/cli.hpp"
#include "sftlab/contours.hpp"
#include "sftlab/gibbs.hpp"
#include "sftlab/models.hpp"
#include "sftlab/sft.hpp"

namespace py = pybind11;
using namespace sftlab;

PYBIND11_MODULE(_sftlab, m) {
    m.doc() = "lattice models, tone lifts and the exact verification toolkit";

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "sftlab");
            std::vector<char*> argv;
            for (auto& a : args) argv.push_back(a.data());
            std::ostringstream out, err;
            int code = run_cli(int(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "run a CLI invocation in-process; returns (exit_code, stdout, stderr)");

    m.def("vertex_census_counts", [] {
        VertexCensus c = vertex_census(vertex_spec().spec);
        py::dict d;
        d["total"] = c.total;
        d["center_dot"] = c.center_dot;
        d["center_cross"] = c.center_cross;
        d["center_straight"] = c.center_straight;
        d["center_corner"] = c.center_corner;
        return d;
    });

    m.def("beta_n", &beta_n, py::arg("N"), py::arg("eps0"));
    m.def("beta_critical_potts", &beta_critical_potts, py::arg("q"));
    m.def("ell_critical", &ell_critical, py::arg("q"));
    m.def("beta_star", &beta_star);
    m.def("onsager_minus_beta_f", &onsager_minus_beta_f, py::arg("beta"));
    m.def("onsager_htop", &onsager_htop, py::arg("N"));

    m.def("trace_m_alpha_pow", &trace_m_alpha_pow, py::arg("ell"));
    m.def("spectrum_check", &spectrum_check);
    m.def("peierls_bound", &peierls_bound, py::arg("beta"), py::arg("ell"));
    m.def(
        "encircling_loops",
        [](int ell) {
            LoopEnumeration e = enumerate_encircling_loops(ell);
            return py::make_tuple(e.count, e.bound);
        },
        py::arg("ell"), "exhaustive count of origin-encircling loops and its upper bound");

    m.def(
        "htop_identity",
        [](int q, int N, std::vector<int> widths) {
            PottsModel pm = potts_cross_spec(q);
            std::vector<py::tuple> rows;
            for (const HtopRow& r : htop_identity_report_potts(pm, N, widths))
                rows.push_back(py::make_tuple(r.width, r.lifted_per_site, r.base_formula));
            return rows;
        },
        py::arg("q"), py::arg("N"), py::arg("widths"),
        "per-width (lifted entropy, base formula) pairs for the cross coding");

    m.def(
        "verify_potts",
        [](const std::string& what, int q, int N, int w, int h, int cases, std::uint64_t seed) {
            std::vector<std::string> args{"verify",  "--what",
                                          what,      "--model",
                                          "potts:" + std::to_string(q),
                                          "--N",     std::to_string(N),
                                          "--cases", "random:" + std::to_string(cases) + ":" +
                                                         std::to_string(seed),
                                          "--volume", std::to_string(w) + "x" + std::to_string(h)};
            args.insert(args.begin(), "sftlab");
            std::vector<char*> argv;
            for (auto& a : args) argv.push_back(a.data());
            std::ostringstream out, err;
            int code = run_cli(int(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str());
        },
        py::arg("what"), py::arg("q"), py::arg("N"), py::arg("w") = 2, py::arg("h") = 2,
        py::arg("cases") = 10, py::arg("seed") = 42,
        "counting / conditional-measure identity checks; returns (exit_code, csv)");
}
