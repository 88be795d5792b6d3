#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "sparseproj/data_io.hpp"
#include "sparseproj/errors.hpp"
#include "sparseproj/gsp.hpp"
#include "sparseproj/nmf.hpp"
#include "sparseproj/wgsp.hpp"

namespace py = pybind11;
using namespace sparseproj;

namespace {

bool rows_axis(const std::string& axis) {
    if (axis == "rows") return true;
    if (axis == "cols") return false;
    throw ConfigError("axis must be 'rows' or 'cols'");
}

VectorGroup group_of(const Matrix& m, bool rows) {
    return rows ? VectorGroup::from_rows(m) : VectorGroup::from_columns(m);
}

ProjectionConfig make_config(double s, double eps, double safeguard, int max_iters) {
    ProjectionConfig cfg;
    cfg.s = s;
    cfg.epsilon = eps;
    cfg.safeguard_ratio = safeguard;
    cfg.max_iters = max_iters;
    return cfg;
}

// Weights shaped like the input, or one vector shared by every member.
WeightGroup weights_of(const Matrix& w, const VectorGroup& g, bool rows) {
    const Eigen::Index len = g[0].size();
    if (w.rows() == 1 && w.cols() == len) return WeightGroup::replicate(WeightVector(w.row(0).transpose()), g.size());
    if (w.cols() == 1 && w.rows() == len) return WeightGroup::replicate(WeightVector(w.col(0)), g.size());
    const Matrix t = rows ? w : Matrix(w.transpose());
    if (t.rows() != static_cast<Eigen::Index>(g.size()) || t.cols() != len) {
        throw DomainError("weights must be one vector or match the input shape");
    }
    std::vector<WeightVector> out;
    for (Eigen::Index i = 0; i < t.rows(); ++i) out.emplace_back(t.row(i).transpose());
    return WeightGroup(std::move(out));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Grouped sparse projections and sparse NMF";

    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<ProjectionResult>(m, "ProjectionResult")
        .def_readonly("mu_star", &ProjectionResult::mu_star)
        .def_readonly("iterations", &ProjectionResult::iterations)
        .def_readonly("achieved_sparsity", &ProjectionResult::achieved_sparsity)
        .def_readonly("feasible_at_zero", &ProjectionResult::feasible_at_zero)
        .def_readonly("discontinuous", &ProjectionResult::discontinuous)
        .def_readonly("sparsity_band", &ProjectionResult::sparsity_band)
        .def_readonly("scales", &ProjectionResult::scales)
        .def("as_rows", &ProjectionResult::as_rows)
        .def("as_columns", &ProjectionResult::as_columns);

    py::class_<NmfResult>(m, "NmfResult")
        .def_readonly("X", &NmfResult::X)
        .def_readonly("H", &NmfResult::H)
        .def_readonly("error_trace", &NmfResult::error_trace)
        .def_readonly("sparsity_trace", &NmfResult::sparsity_trace)
        .def_readonly("best_error", &NmfResult::best_error)
        .def_readonly("best_iteration", &NmfResult::best_iteration);

    m.def("spar", &spar, py::arg("x"));
    m.def(
        "spar_weighted", [](const Vector& x, const Vector& w) { return spar_weighted(x, WeightVector(w)); },
        py::arg("x"), py::arg("w"));
    m.def(
        "average_sparsity",
        [](const Matrix& a, const std::string& axis) { return average_sparsity(group_of(a, rows_axis(axis))); },
        py::arg("a"), py::arg("axis") = "rows");

    m.def(
        "project",
        [](const Matrix& a, double s, double eps, const std::string& axis, bool relative, double safeguard,
           int max_iters) {
            const VectorGroup g = group_of(a, rows_axis(axis));
            const auto cfg = make_config(s, eps, safeguard, max_iters);
            return relative ? project_group_relative(g, cfg) : project_group(g, cfg);
        },
        py::arg("a"), py::arg("s"), py::arg("eps") = 1e-4, py::arg("axis") = "rows",
        py::arg("relative") = false, py::arg("safeguard") = 0.9, py::arg("max_iters") = 100,
        "Project the rows (or columns) of `a` to average sparsity `s`.");

    m.def(
        "project_weighted",
        [](const Matrix& a, const Matrix& weights, double s, double eps, const std::string& axis,
           double safeguard, int max_iters) {
            const bool rows = rows_axis(axis);
            const VectorGroup g = group_of(a, rows);
            return project_group_weighted(g, weights_of(weights, g, rows),
                                          make_config(s, eps, safeguard, max_iters));
        },
        py::arg("a"), py::arg("weights"), py::arg("s"), py::arg("eps") = 1e-4, py::arg("axis") = "rows",
        py::arg("safeguard") = 0.9, py::arg("max_iters") = 100);

    m.def(
        "nmf",
        [](const Matrix& y, int rank, const std::string& variant, double s, int iters, std::uint64_t seed,
           double eps, std::optional<Matrix> weights) {
            const auto v = parse_variant(variant);
            if (!v) throw ConfigError("unknown variant '" + variant + "'");
            NmfProblem p;
            p.Y = y;
            p.rank = rank;
            p.variant = *v;
            p.s = s;
            p.outer_iters = iters;
            p.seed = seed;
            p.epsilon = eps;
            if (weights) {
                // One column per basis vector, or a single shared column.
                const Matrix& w = *weights;
                if (w.cols() == 1) {
                    p.weights = WeightGroup::replicate(WeightVector(w.col(0)), static_cast<std::size_t>(rank));
                } else {
                    std::vector<WeightVector> ws;
                    for (Eigen::Index k = 0; k < w.cols(); ++k) ws.emplace_back(w.col(k));
                    p.weights = WeightGroup(std::move(ws));
                }
            }
            py::gil_scoped_release release;
            return run_nmf(p);
        },
        py::arg("y"), py::arg("rank"), py::arg("variant") = "psnmf", py::arg("s") = 0.5,
        py::arg("iters") = 500, py::arg("seed") = 0, py::arg("eps") = 1e-4, py::arg("weights") = py::none());

    m.def(
        "synthetic_nmf",
        [](int rows, int cols, int rank, std::uint64_t seed) {
            const auto inst = gen_synthetic_nmf(rows, cols, rank, seed);
            return py::make_tuple(inst.Y, inst.X_true, inst.H_true, inst.true_sparsity);
        },
        py::arg("m"), py::arg("n"), py::arg("rank"), py::arg("seed"),
        "Returns (Y, X_true, H_true, true_sparsity).");

    m.def("radial_weights", &radial_weights, py::arg("height"), py::arg("width"), py::arg("sigma"));
}
