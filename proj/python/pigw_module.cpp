#include "pigw/baselines.hpp"
#include "pigw/errors.hpp"
#include "pigw/invariants.hpp"
#include "pigw/metrics.hpp"
#include "pigw/pigmm.hpp"
#include "pigw/pipeline.hpp"
#include "pigw/wick.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace pigw;

namespace {

ModelParams make_params(const std::array<double, kParamCount>& f, int d) {
    ModelParams p;
    p.d = d;
    p.f = f;
    return p;
}

// Column name -> list of cell values.
py::dict table_to_dict(const Table& t) {
    py::dict out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        py::list col;
        for (const auto& row : t.rows)
            std::visit([&](const auto& v) { col.append(v); }, row[c]);
        out[py::str(t.columns[c])] = col;
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_pigw, m) {
    m.doc() = "Permutation-invariant Gaussian matrix models for neural network weight ensembles";

    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.attr("INVARIANT_COUNT") = kInvariantCount;
    m.attr("PARAM_COUNT") = kParamCount;

    // invariants
    m.def("eval_invariant", &eval_invariant, py::arg("w"), py::arg("index"));
    m.def("eval_all", &eval_all, py::arg("w"), "All 52 invariants; slot k holds invariant k + 1.");
    m.def("naive_eval", py::overload_cast<const Eigen::MatrixXd&, int>(&naive_eval), py::arg("w"), py::arg("index"),
          "Literal index sum; cost grows as d to the number of summed indices.");
    m.def(
        "invariant_graph",
        [](int index) {
            const InvariantId& g = invariant(index);
            std::vector<std::pair<int, int>> edges;
            for (const auto& e : g.edges) edges.emplace_back(e.src, e.dst);
            return py::make_tuple(g.order, g.node_count, edges);
        },
        py::arg("index"), "(order, node_count, edges) of one invariant.");

    // model
    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init(&make_params), py::arg("f"), py::arg("d"))
        .def_readwrite("d", &ModelParams::d)
        .def_readwrite("f", &ModelParams::f)
        .def("__repr__", [](const ModelParams& p) { return "<ModelParams d=" + std::to_string(p.d) + ">"; });

    py::class_<PsdReport>(m, "PsdReport")
        .def_readonly("is_valid", &PsdReport::is_valid)
        .def_readonly("min_eig_V0", &PsdReport::min_eig_V0)
        .def_readonly("min_eig_VH", &PsdReport::min_eig_VH)
        .def_readonly("s_V2", &PsdReport::s_V2)
        .def_readonly("s_V3", &PsdReport::s_V3);

    m.def("fit_params", &fit_params, py::arg("lq_means"), py::arg("d"));
    m.def("expected_lq_invariants", &expected_lq_invariants, py::arg("params"));
    m.def("psd_check", &psd_check, py::arg("params"));
    m.def("clip_to_psd", &clip_to_psd, py::arg("params"));
    m.def("simple_gaussian_params", &simple_gaussian_params, py::arg("sigma2"), py::arg("d"));
    m.def("uniform_equivalent_params", &uniform_equivalent_params, py::arg("sigma"), py::arg("d"));
    m.def("entry_mean_vector", &entry_mean_vector, py::arg("params"));
    m.def("entry_covariance_matrix", &entry_covariance_matrix, py::arg("params"));
    m.def(
        "sample_matrices",
        [](const ModelParams& p, int n, std::uint64_t seed) {
            const MatrixSampler sampler(p);
            Rng rng(seed);
            std::vector<Eigen::MatrixXd> out;
            out.reserve(n);
            for (int i = 0; i < n; ++i) out.push_back(sampler.draw(rng));
            return out;
        },
        py::arg("params"), py::arg("n"), py::arg("seed") = 0);

    // expectations
    m.def("expected_invariant", py::overload_cast<const ModelParams&, int>(&expected_invariant), py::arg("params"),
          py::arg("index"));
    m.def("brute_expected_invariant", &brute_expected_invariant, py::arg("params"), py::arg("index"));

    // baselines
    m.def(
        "init_invariant_baseline",
        [](const std::string& scheme, int d, int N) {
            const InvariantBaseline b = init_invariant_baseline(parse_scheme(scheme), d, N);
            return py::make_tuple(b.expectation, b.se);
        },
        py::arg("scheme"), py::arg("d"), py::arg("n"), "(expectation, se) of invariants 1..13.");
    m.def(
        "init_param_baseline",
        [](const std::string& scheme, int d, int N) {
            const ParamBaseline b = init_param_baseline(parse_scheme(scheme), d, N);
            return py::make_tuple(b.expectation, b.sd);
        },
        py::arg("scheme"), py::arg("d"), py::arg("n"), "(expectation, sd) of the 13 fitted parameters.");

    // metrics
    m.def("deviation_lq", &deviation_lq, py::arg("observed"), py::arg("expectation"), py::arg("se"));
    m.def("deviation_cq", &deviation_cq, py::arg("theory"), py::arg("exp_mean"), py::arg("exp_std"));
    m.def(
        "normalized_change",
        [](double start, double final_) {
            const NormalizedChange c = normalized_change(start, final_);
            return py::make_tuple(c.value, c.undefined);
        },
        py::arg("d_start"), py::arg("d_final"));
    m.def("pmcc", &pmcc, py::arg("x"), py::arg("y"));
    m.def(
        "wasserstein",
        [](const ModelParams& a, const ModelParams& b, bool clip) { return wasserstein(a, b, {clip}); },
        py::arg("a"), py::arg("b"), py::arg("clip_negative") = false);
    m.def("gaussian_wasserstein_squared", &gaussian_wasserstein_squared, py::arg("m1"), py::arg("s1"),
          py::arg("m2"), py::arg("s2"));

    // stores and analysis
    py::class_<SnapshotStore>(m, "SnapshotStore")
        .def_property_readonly("scheme", [](const SnapshotStore& s) { return to_string(s.scheme); })
        .def_readonly("regularized", &SnapshotStore::regularized)
        .def_readonly("d", &SnapshotStore::d)
        .def_readonly("layer_count", &SnapshotStore::layer_count)
        .def_readonly("epochs", &SnapshotStore::epochs)
        .def_readonly("runs", &SnapshotStore::runs)
        .def_readonly("master_seed", &SnapshotStore::master_seed)
        .def_readonly("accuracies", &SnapshotStore::accuracies)
        .def("at", [](const SnapshotStore& s, int run, int layer, int epoch) { return s.at(run, layer, epoch); })
        .def("ensemble", &SnapshotStore::ensemble, py::arg("layer"), py::arg("epoch"));

    m.def("read_store", &read_store, py::arg("path"));
    m.def(
        "analyze",
        [](const SnapshotStore& store, std::vector<int> ids, bool clip) {
            if (ids.empty()) ids = ExperimentConfig::default_predict_ids();
            py::dict out;
            for (const auto& [name, table] : cmd_analyze(store, AnalyzeOptions{ids, clip}))
                out[py::str(name)] = table_to_dict(table);
            return out;
        },
        py::arg("store"), py::arg("ids") = std::vector<int>{}, py::arg("clip_negative") = false,
        "Every analysis table of a store as {name: {column: values}}.");
    m.def("read_table", [](const std::filesystem::path& p) { return table_to_dict(read_table(p)); },
          py::arg("path"));
}
