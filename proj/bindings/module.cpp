#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "lapreg/errors.hpp"
#include "lapreg/io.hpp"
#include "lapreg/metrics.hpp"
#include "lapreg/projections.hpp"
#include "lapreg/regression.hpp"
#include "lapreg/simulation.hpp"
#include "lapreg/spectral.hpp"

namespace py = pybind11;
using namespace lapreg;

namespace {

Matrix matrix_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& array) {
    if (array.ndim() != 2) fail(ErrorCode::BadInput, "expected a 2-d array");
    Matrix mat(static_cast<int>(array.shape(0)), static_cast<int>(array.shape(1)));
    const auto view = array.unchecked<2>();
    for (int i = 0; i < mat.rows(); ++i)
        for (int j = 0; j < mat.cols(); ++j) mat(i, j) = view(i, j);
    return mat;
}

py::array_t<double> numpy_from_matrix(const Matrix& mat) {
    py::array_t<double> array({mat.rows(), mat.cols()});
    auto view = array.mutable_unchecked<2>();
    for (int i = 0; i < mat.rows(); ++i)
        for (int j = 0; j < mat.cols(); ++j) view(i, j) = mat(i, j);
    return array;
}

MetricSpec make_metric(const std::string& metric, double alpha) {
    if (metric == "frobenius") return MetricSpec::frobenius();
    if (metric == "power") return MetricSpec::power(alpha);
    fail(ErrorCode::BadConfig, "metric must be 'frobenius' or 'power'");
}

Dataset dataset_from_python(const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
                            const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>& ls,
                            std::optional<double> bound, const std::string& space) {
    Matrix predictors;
    if (x.ndim() == 1) {
        predictors = Matrix(static_cast<int>(x.shape(0)), 1);
        const auto view = x.unchecked<1>();
        for (int k = 0; k < predictors.rows(); ++k) predictors(k, 0) = view(k);
    } else {
        predictors = matrix_from_numpy(x);
    }
    std::vector<Matrix> responses;
    responses.reserve(ls.size());
    for (const auto& l : ls) responses.push_back(matrix_from_numpy(l));
    const ResponseSpace parsed_space =
        space == "squared_laplacian" ? ResponseSpace::SquaredLaplacian : ResponseSpace::Laplacian;
    return Dataset::from_raw(std::move(predictors), std::move(responses), bound, parsed_space);
}

struct PyModel {
    FittedModel model;

    py::array_t<double> predict(const std::vector<double>& x) const {
        return numpy_from_matrix(model.predict(x).entries());
    }
    double r2() const { return frechet_r2(model); }
    std::string mode() const { return fit_mode_name(model.mode()); }
    std::string metric() const { return model.metric().is_power() ? "power" : "frobenius"; }
    double alpha() const { return model.metric().alpha; }
    std::optional<double> bandwidth() const {
        if (!model.kernel().has_value()) return std::nullopt;
        return model.kernel()->bandwidth;
    }
    void save(const std::string& path) const { save_model(model, path); }
};

PyModel fit_from_python(const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
                        const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>& ls,
                        const std::string& mode, const std::string& metric, double alpha,
                        const std::string& kernel, std::optional<double> bandwidth, std::optional<double> bound,
                        const std::string& space) {
    const Dataset data = dataset_from_python(x, ls, bound, space);
    FitSpec spec;
    spec.mode = fit_mode_from_string(mode);
    spec.metric = make_metric(metric, alpha);
    spec.kernel_family = kernel_family_from_string(kernel);
    spec.bandwidth = bandwidth;
    return PyModel{fit_with_spec(data, spec)};
}

py::dict simulate_from_python(const std::string& scenario, int n, int m, uint64_t seed,
                              const std::string& wsbm_flavor, int m1, int m2, double p11, double p12,
                              double p22) {
    ScenarioSpec spec;
    spec.scenario = scenario_from_string(scenario);
    spec.sample_size = n;
    spec.node_count = m;
    spec.seed = seed;
    spec.wsbm.block1 = m1;
    spec.wsbm.block2 = m2;
    spec.wsbm.p11 = p11;
    spec.wsbm.p12 = p12;
    spec.wsbm.p22 = p22;
    if (wsbm_flavor == "local")
        spec.wsbm.flavor = WsbmFlavor::Local;
    else if (wsbm_flavor == "global-sqrt")
        spec.wsbm.flavor = WsbmFlavor::GlobalSqrt;

    const Dataset data = simulate_scenario(spec);
    py::list laplacians;
    for (int k = 0; k < data.sample_size(); ++k) laplacians.append(numpy_from_matrix(data.response(k)));
    py::dict out;
    out["x"] = numpy_from_matrix(data.predictors());
    out["laplacians"] = std::move(laplacians);
    out["W"] = data.bound();
    out["space"] = data.space() == ResponseSpace::Laplacian ? "laplacian" : "squared_laplacian";
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, module) {
    module.doc() = "Frechet regression for network responses represented as graph Laplacians";

    py::register_exception<Error>(module, "LapregError");

    py::class_<PyModel>(module, "Model")
        .def("predict", &PyModel::predict, py::arg("x"))
        .def("r2", &PyModel::r2)
        .def("save", &PyModel::save, py::arg("path"))
        .def_property_readonly("mode", &PyModel::mode)
        .def_property_readonly("metric", &PyModel::metric)
        .def_property_readonly("alpha", &PyModel::alpha)
        .def_property_readonly("bandwidth", &PyModel::bandwidth);

    module.def("simulate", &simulate_from_python, py::arg("scenario"), py::arg("n"), py::arg("m") = 10,
               py::arg("seed") = 0, py::arg("wsbm_flavor") = "global", py::arg("m1") = 5, py::arg("m2") = 5,
               py::arg("p11") = 0.5, py::arg("p12") = 0.2, py::arg("p22") = 0.5,
               "Draw a dataset from one of the built-in scenarios");

    module.def("fit", &fit_from_python, py::arg("x"), py::arg("laplacians"), py::arg("mode") = "global",
               py::arg("metric") = "frobenius", py::arg("alpha") = 0.5, py::arg("kernel") = "gaussian",
               py::arg("bandwidth") = std::nullopt, py::arg("W") = std::nullopt,
               py::arg("space") = "laplacian",
               "Fit a network regression; bandwidth None means leave-one-out selection for local mode");

    module.def("load_model", [](const std::string& path) { return PyModel{load_model(path)}; }, py::arg("path"));

    module.def(
        "distance",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b, const std::string& metric,
           double alpha) { return distance(matrix_from_numpy(a), matrix_from_numpy(b), make_metric(metric, alpha)); },
        py::arg("a"), py::arg("b"), py::arg("metric") = "frobenius", py::arg("alpha") = 0.5);

    module.def(
        "frechet_mean",
        [](const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>& ls,
           const std::string& metric, double alpha, double bound) {
            std::vector<GraphLaplacian> responses;
            responses.reserve(ls.size());
            for (const auto& l : ls)
                responses.push_back(GraphLaplacian::validated(matrix_from_numpy(l), bound));
            return numpy_from_matrix(frechet_mean(responses, make_metric(metric, alpha)).entries());
        },
        py::arg("laplacians"), py::arg("metric") = "frobenius", py::arg("alpha") = 0.5, py::arg("W") = 1.0);

    module.def(
        "project_laplacian",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& target, double bound) {
            return numpy_from_matrix(project_laplacian(matrix_from_numpy(target), bound).laplacian.entries());
        },
        py::arg("target"), py::arg("W"), "Nearest graph Laplacian in Frobenius distance");

    module.def(
        "project_psd",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& sym) {
            return numpy_from_matrix(project_psd(matrix_from_numpy(sym)));
        },
        py::arg("sym"));

    module.def(
        "matrix_power",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& psd, double alpha) {
            return numpy_from_matrix(matrix_power(matrix_from_numpy(psd), alpha));
        },
        py::arg("psd"), py::arg("alpha"));

    module.def(
        "sym_eigen",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& sym) {
            const auto decomp = sym_eigen(matrix_from_numpy(sym));
            return py::make_tuple(decomp.eigenvalues, numpy_from_matrix(decomp.eigenvectors));
        },
        py::arg("sym"), "Eigenvalues (descending) and eigenvectors of a symmetric matrix");

    module.def(
        "true_target",
        [](const std::string& scenario, double x, int m) {
            return numpy_from_matrix(true_target(scenario_from_string(scenario), x, m).entries());
        },
        py::arg("scenario"), py::arg("x"), py::arg("m") = 10);

    module.def(
        "validate_laplacian",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& raw, double bound) {
            return numpy_from_matrix(GraphLaplacian::validated(matrix_from_numpy(raw), bound).entries());
        },
        py::arg("raw"), py::arg("W"));

    module.attr("__version__") = "0.1.0";
}
