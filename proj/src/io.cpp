#include "lapreg/io.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "lapreg/errors.hpp"

namespace lapreg {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail_at(const std::string& origin, size_t line, const std::string& message) {
    fail(ErrorCode::BadInput, origin + ":" + std::to_string(line) + ": " + message);
}

json parse_line(const std::string& text, const std::string& origin, size_t line) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) fail_at(origin, line, "malformed JSON");
    if (!parsed.is_object()) fail_at(origin, line, "expected a JSON object");
    return parsed;
}

Matrix matrix_from_json(const json& value, const std::string& origin, size_t line) {
    if (!value.is_array() || value.empty()) fail_at(origin, line, "\"L\" must be an array of rows");
    const size_t m = value.size();
    Matrix mat(static_cast<int>(m), static_cast<int>(m));
    for (size_t i = 0; i < m; ++i) {
        const json& row = value[i];
        if (!row.is_array() || row.size() != m) fail_at(origin, line, "\"L\" must be square");
        for (size_t j = 0; j < m; ++j) {
            if (!row[j].is_number()) fail_at(origin, line, "\"L\" entries must be numbers");
            mat(static_cast<int>(i), static_cast<int>(j)) = row[j].get<double>();
        }
    }
    return mat;
}

std::vector<double> predictor_from_json(const json& value, const std::string& origin, size_t line) {
    std::vector<double> x;
    if (value.is_number()) {
        x.push_back(value.get<double>());
    } else if (value.is_array()) {
        for (const json& entry : value) {
            if (!entry.is_number()) fail_at(origin, line, "\"x\" entries must be numbers");
            x.push_back(entry.get<double>());
        }
    } else {
        fail_at(origin, line, "\"x\" must be a number or an array of numbers");
    }
    if (x.empty()) fail_at(origin, line, "\"x\" must not be empty");
    return x;
}

ordered_json matrix_to_json(const Matrix& mat) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < mat.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

const char* space_name(ResponseSpace space) {
    return space == ResponseSpace::Laplacian ? "laplacian" : "squared_laplacian";
}

ResponseSpace space_from_string(const std::string& name, const std::string& origin, size_t line) {
    if (name == "laplacian") return ResponseSpace::Laplacian;
    if (name == "squared_laplacian") return ResponseSpace::SquaredLaplacian;
    fail_at(origin, line, "unknown response space '" + name + "'");
}

ordered_json metric_to_json(const MetricSpec& metric) {
    ordered_json out;
    if (metric.is_power()) {
        out["kind"] = "power";
        out["alpha"] = metric.alpha;
    } else {
        out["kind"] = "frobenius";
    }
    return out;
}

MetricSpec metric_from_json(const json& value, const std::string& origin) {
    if (!value.is_object() || !value.contains("kind"))
        fail(ErrorCode::BadInput, origin + ": metric needs a \"kind\"");
    const std::string kind = value["kind"].get<std::string>();
    if (kind == "frobenius") return MetricSpec::frobenius();
    if (kind == "power") {
        if (!value.contains("alpha")) fail(ErrorCode::BadInput, origin + ": power metric needs \"alpha\"");
        return MetricSpec::power(value["alpha"].get<double>());
    }
    fail(ErrorCode::BadInput, origin + ": unknown metric kind '" + kind + "'");
}

}  // namespace

void validate_response_matrix(const Matrix& response, double bound, ResponseSpace space) {
    if (space == ResponseSpace::Laplacian) {
        (void)GraphLaplacian::validated(response, bound);
        return;
    }
    // Route through a throwaway two-observation dataset so both spaces share
    // one validator.
    Matrix predictors(2, 1);
    predictors(1, 0) = 1.0;
    (void)Dataset::from_raw(std::move(predictors), {response, response}, bound, space);
}

Dataset read_dataset(std::istream& in, const std::string& origin) {
    std::string text;
    size_t line_number = 0;
    std::optional<int> header_m;
    std::optional<int> header_p;
    std::optional<double> header_w;
    ResponseSpace space = ResponseSpace::Laplacian;

    std::vector<std::vector<double>> predictors;
    std::vector<Matrix> responses;
    std::vector<size_t> line_of_row;
    bool saw_row = false;

    while (std::getline(in, text)) {
        ++line_number;
        if (text.empty()) continue;
        json parsed = parse_line(text, origin, line_number);
        if (!saw_row && !parsed.contains("x") && (parsed.contains("m") || parsed.contains("W") || parsed.contains("p"))) {
            if (parsed.contains("m")) header_m = parsed["m"].get<int>();
            if (parsed.contains("p")) header_p = parsed["p"].get<int>();
            if (parsed.contains("W")) header_w = parsed["W"].get<double>();
            if (parsed.contains("space"))
                space = space_from_string(parsed["space"].get<std::string>(), origin, line_number);
            continue;
        }
        if (!parsed.contains("x") || !parsed.contains("L")) fail_at(origin, line_number, "need \"x\" and \"L\"");
        saw_row = true;
        predictors.push_back(predictor_from_json(parsed["x"], origin, line_number));
        responses.push_back(matrix_from_json(parsed["L"], origin, line_number));
        line_of_row.push_back(line_number);
        if (predictors.back().size() != predictors.front().size())
            fail_at(origin, line_number, "inconsistent predictor dimension");
        if (responses.back().rows() != responses.front().rows())
            fail_at(origin, line_number, "inconsistent node count");
        if (header_m && responses.back().rows() != *header_m)
            fail_at(origin, line_number, "node count disagrees with header");
        if (header_p && static_cast<int>(predictors.back().size()) != *header_p)
            fail_at(origin, line_number, "predictor dimension disagrees with header");
    }
    if (predictors.size() < 2) fail(ErrorCode::BadInput, origin + ": need at least two observations");

    double bound;
    if (header_w) {
        bound = *header_w;
    } else {
        bound = 0.0;
        for (const Matrix& response : responses)
            for (int i = 0; i < response.rows(); ++i)
                for (int j = 0; j < response.cols(); ++j)
                    if (i != j) bound = std::max(bound, std::fabs(response(i, j)));
    }
    for (size_t k = 0; k < responses.size(); ++k) {
        try {
            validate_response_matrix(responses[k], bound, space);
        } catch (const Error& error) {
            fail(error.code(), origin + ":" + std::to_string(line_of_row[k]) + ": " + error.what());
        }
    }

    const int n = static_cast<int>(predictors.size());
    const int p = static_cast<int>(predictors.front().size());
    Matrix x(n, p);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < p; ++j) x(k, j) = predictors[static_cast<size_t>(k)][static_cast<size_t>(j)];
    return Dataset::from_raw(std::move(x), std::move(responses), bound, space);
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::BadInput, "cannot open dataset file '" + path + "'");
    return read_dataset(in, path);
}

std::string dataset_to_jsonl(const Dataset& data) {
    std::ostringstream out;
    ordered_json header;
    header["m"] = data.node_count();
    header["p"] = data.predictor_dim();
    header["W"] = data.bound();
    if (data.space() != ResponseSpace::Laplacian) header["space"] = space_name(data.space());
    out << header.dump() << '\n';
    for (int k = 0; k < data.sample_size(); ++k) {
        ordered_json row;
        ordered_json x = ordered_json::array();
        for (int j = 0; j < data.predictor_dim(); ++j) x.push_back(data.predictor(k, j));
        row["x"] = std::move(x);
        row["L"] = matrix_to_json(data.response(k));
        out << row.dump() << '\n';
    }
    return out.str();
}

void save_dataset(const Dataset& data, const std::string& path) {
    write_text_file(path, dataset_to_jsonl(data));
}

std::string model_to_json(const FittedModel& model) {
    ordered_json out;
    out["format"] = "lapreg-model";
    out["version"] = 1;
    out["mode"] = fit_mode_name(model.mode());
    out["metric"] = metric_to_json(model.metric());
    if (model.kernel().has_value()) {
        ordered_json kernel;
        kernel["family"] = kernel_family_name(model.kernel()->family);
        kernel["bandwidth"] = model.kernel()->bandwidth;
        out["kernel"] = std::move(kernel);
    }
    if (model.metric().is_power()) out["cap"] = model.embedding_cap();

    const Dataset& data = model.data();
    ordered_json payload;
    payload["m"] = data.node_count();
    payload["p"] = data.predictor_dim();
    payload["W"] = data.bound();
    payload["space"] = space_name(data.space());
    ordered_json xs = ordered_json::array();
    ordered_json ls = ordered_json::array();
    for (int k = 0; k < data.sample_size(); ++k) {
        ordered_json x = ordered_json::array();
        for (int j = 0; j < data.predictor_dim(); ++j) x.push_back(data.predictor(k, j));
        xs.push_back(std::move(x));
        ls.push_back(matrix_to_json(data.response(k)));
    }
    payload["x"] = std::move(xs);
    payload["L"] = std::move(ls);
    out["data"] = std::move(payload);
    return out.dump() + "\n";
}

FittedModel model_from_json(const std::string& text, const std::string& origin) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) fail(ErrorCode::BadInput, origin + ": malformed model JSON");
    if (!parsed.contains("format") || parsed["format"] != "lapreg-model")
        fail(ErrorCode::BadInput, origin + ": not a lapreg model file");

    const RegressionMode mode = fit_mode_from_string(parsed.value("mode", std::string{}));
    const MetricSpec metric = metric_from_json(parsed.at("metric"), origin);
    std::optional<KernelSpec> kernel;
    if (parsed.contains("kernel")) {
        const json& k = parsed["kernel"];
        kernel = KernelSpec{kernel_family_from_string(k.value("family", std::string{"gaussian"})),
                            k.value("bandwidth", 0.0)};
    }
    std::optional<double> cap;
    if (parsed.contains("cap")) cap = parsed["cap"].get<double>();

    const json& payload = parsed.at("data");
    const int m = payload.at("m").get<int>();
    const int p = payload.at("p").get<int>();
    const double bound = payload.at("W").get<double>();
    const ResponseSpace space = space_from_string(payload.value("space", std::string{"laplacian"}), origin, 0);
    const json& xs = payload.at("x");
    const json& ls = payload.at("L");
    if (!xs.is_array() || !ls.is_array() || xs.size() != ls.size())
        fail(ErrorCode::BadInput, origin + ": data arrays disagree");
    const int n = static_cast<int>(xs.size());
    Matrix predictors(n, p);
    std::vector<Matrix> responses;
    responses.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const std::vector<double> x = predictor_from_json(xs[static_cast<size_t>(k)], origin, 0);
        if (static_cast<int>(x.size()) != p) fail(ErrorCode::BadInput, origin + ": predictor dimension mismatch");
        for (int j = 0; j < p; ++j) predictors(k, j) = x[static_cast<size_t>(j)];
        responses.push_back(matrix_from_json(ls[static_cast<size_t>(k)], origin, 0));
        if (responses.back().rows() != m) fail(ErrorCode::BadInput, origin + ": node count mismatch");
    }
    Dataset data = Dataset::from_raw(std::move(predictors), std::move(responses), bound, space);
    return fit(std::move(data), mode, metric, kernel, cap);
}

void save_model(const FittedModel& model, const std::string& path) {
    write_text_file(path, model_to_json(model));
}

FittedModel load_model(const std::string& path) { return model_from_json(read_text_file(path), path); }

std::vector<std::vector<double>> read_queries(std::istream& in, const std::string& origin) {
    std::vector<std::vector<double>> queries;
    std::string text;
    size_t line_number = 0;
    while (std::getline(in, text)) {
        ++line_number;
        if (text.empty()) continue;
        json parsed = parse_line(text, origin, line_number);
        if (!parsed.contains("x")) fail_at(origin, line_number, "need \"x\"");
        queries.push_back(predictor_from_json(parsed["x"], origin, line_number));
        if (queries.back().size() != queries.front().size())
            fail_at(origin, line_number, "inconsistent query dimension");
    }
    if (queries.empty()) fail(ErrorCode::BadInput, origin + ": no queries");
    return queries;
}

std::vector<std::vector<double>> load_queries(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::BadInput, "cannot open query file '" + path + "'");
    return read_queries(in, path);
}

std::string report_to_json(const MonteCarloReport& report, const FitSpec& fit_spec) {
    ordered_json out;
    out["scenario"] = scenario_name(report.scenario);
    out["node_count"] = report.node_count;
    out["runs"] = report.runs;
    out["seed"] = report.seed;
    out["mode"] = fit_mode_name(fit_spec.mode);
    out["metric"] = metric_to_json(fit_spec.metric);
    if (fit_spec.mode == RegressionMode::Local) {
        out["kernel_family"] = kernel_family_name(fit_spec.kernel_family);
        if (fit_spec.bandwidth.has_value())
            out["bandwidth"] = *fit_spec.bandwidth;
        else
            out["bandwidth"] = "cv";
    }
    ordered_json grid;
    grid["points"] = 101;
    grid["lo"] = 0.005;
    grid["hi"] = 0.995;
    out["ise_grid"] = std::move(grid);
    ordered_json per_n = ordered_json::array();
    for (const auto& row : report.per_n) {
        ordered_json entry;
        entry["n"] = row.sample_size;
        entry["mise"] = row.mise;
        entry["se"] = row.se;
        entry["ise"] = row.ise;
        per_n.push_back(std::move(entry));
    }
    out["per_n"] = std::move(per_n);
    if (std::isfinite(report.slope)) out["slope"] = report.slope;
    return out.dump(2) + "\n";
}

std::string format_double(double value) { return json(value).dump(); }

std::string matrix_to_csv(const Matrix& mat) {
    std::ostringstream out;
    for (int i = 0; i < mat.rows(); ++i) {
        for (int j = 0; j < mat.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(mat(i, j));
        }
        out << '\n';
    }
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::BadInput, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::BadInput, "cannot write '" + path + "'");
    out << text;
    if (!out) fail(ErrorCode::BadInput, "failed writing '" + path + "'");
}

const char* fit_mode_name(RegressionMode mode) { return mode == RegressionMode::Global ? "global" : "local"; }

RegressionMode fit_mode_from_string(const std::string& name) {
    if (name == "global") return RegressionMode::Global;
    if (name == "local") return RegressionMode::Local;
    fail(ErrorCode::BadConfig, "unknown mode '" + name + "'");
}

const char* kernel_family_name(KernelFamily family) {
    return family == KernelFamily::Gaussian ? "gaussian" : "epanechnikov";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "gaussian") return KernelFamily::Gaussian;
    if (name == "epanechnikov") return KernelFamily::Epanechnikov;
    fail(ErrorCode::BadConfig, "unknown kernel '" + name + "'");
}

}  // namespace lapreg
