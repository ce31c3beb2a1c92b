#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lapreg/errors.hpp"
#include "lapreg/io.hpp"
#include "lapreg/regression.hpp"
#include "lapreg/simulation.hpp"

namespace {

using namespace lapreg;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotSymmetric:
        case ErrorCode::RowSumNonZero:
        case ErrorCode::OffDiagonalOutOfBox:
        case ErrorCode::EntryOutOfBox:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::BadInput:
            return 2;
        case ErrorCode::SingularDesign:
        case ErrorCode::LocalNeedsScalarPredictor:
        case ErrorCode::ZeroVariance:
        case ErrorCode::AllBandwidthsFailed:
        case ErrorCode::DegenerateFit:
        case ErrorCode::BadConfig:
            return 3;
        case ErrorCode::NoConvergence:
        case ErrorCode::NegativeEigenvalue:
        case ErrorCode::BandwidthTooSmall:
            return 4;
    }
    return 1;
}

struct CommonFlags {
    int threads = 1;
    bool quiet = false;
};

struct FitFlags {
    std::string mode = "global";
    std::string metric = "frobenius";
    double alpha = 0.5;
    std::string kernel = "gaussian";
    std::string bandwidth = "cv";
    std::string cv_grid;
};

void add_fit_flags(CLI::App* cmd, FitFlags& flags) {
    cmd->add_option("--mode", flags.mode, "Regression mode: global or local")
        ->check(CLI::IsMember({"global", "local"}));
    cmd->add_option("--metric", flags.metric, "Distance: frobenius or power")
        ->check(CLI::IsMember({"frobenius", "power"}));
    cmd->add_option("--alpha", flags.alpha, "Exponent of the power metric (default 0.5)");
    cmd->add_option("--kernel", flags.kernel, "Kernel family for local mode")
        ->check(CLI::IsMember({"gaussian", "epanechnikov"}));
    cmd->add_option("--bandwidth", flags.bandwidth, "Bandwidth value, or 'cv' for leave-one-out selection");
    cmd->add_option("--cv-grid", flags.cv_grid, "Bandwidth grid: comma list or lo:hi:count (log-spaced)");
}

std::vector<double> parse_cv_grid(const std::string& text) {
    std::vector<double> grid;
    const size_t first_colon = text.find(':');
    if (first_colon != std::string::npos) {
        const size_t second_colon = text.find(':', first_colon + 1);
        if (second_colon == std::string::npos) fail(ErrorCode::BadConfig, "grid spec must be lo:hi:count");
        const double lo = std::stod(text.substr(0, first_colon));
        const double hi = std::stod(text.substr(first_colon + 1, second_colon - first_colon - 1));
        const int count = std::stoi(text.substr(second_colon + 1));
        if (lo <= 0.0 || hi < lo || count < 1) fail(ErrorCode::BadConfig, "bad grid spec '" + text + "'");
        if (count == 1) return {lo};
        const double step = (std::log(hi) - std::log(lo)) / (count - 1);
        for (int i = 0; i < count; ++i) grid.push_back(std::exp(std::log(lo) + step * i));
        return grid;
    }
    std::string::size_type start = 0;
    while (start <= text.size()) {
        const size_t comma = text.find(',', start);
        const std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!piece.empty()) grid.push_back(std::stod(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (grid.empty()) fail(ErrorCode::BadConfig, "empty bandwidth grid");
    return grid;
}

FitSpec build_fit_spec(const FitFlags& flags) {
    FitSpec spec;
    spec.mode = fit_mode_from_string(flags.mode);
    spec.metric = flags.metric == "power" ? MetricSpec::power(flags.alpha) : MetricSpec::frobenius();
    spec.kernel_family = kernel_family_from_string(flags.kernel);
    if (flags.bandwidth != "cv") spec.bandwidth = std::stod(flags.bandwidth);
    if (!flags.cv_grid.empty()) spec.cv_grid = parse_cv_grid(flags.cv_grid);
    return spec;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::string::size_type start = 0;
    while (start <= text.size()) {
        const size_t comma = text.find(',', start);
        const std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!piece.empty()) values.push_back(std::stoi(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (values.empty()) fail(ErrorCode::BadConfig, "empty list");
    return values;
}

int run_simulate(const std::string& scenario_name_flag, int n, int m, uint64_t seed, const WsbmSpec& wsbm,
                 const std::string& design, const std::string& out_path, const CommonFlags& common) {
    ScenarioSpec spec;
    spec.scenario = scenario_from_string(scenario_name_flag);
    spec.sample_size = n;
    spec.node_count = m;
    spec.seed = seed;
    spec.design = design == "equispaced" ? PredictorDesign::Equispaced : PredictorDesign::Random;
    spec.wsbm = wsbm;
    const Dataset data = simulate_scenario(spec);
    save_dataset(data, out_path);
    if (!common.quiet)
        std::cout << "wrote " << data.sample_size() << " observations (m = " << data.node_count()
                  << ", W = " << format_double(data.bound()) << ") to " << out_path << "\n";
    return 0;
}

int run_fit(const std::string& data_path, const FitFlags& flags, const std::string& out_path,
            const CommonFlags& common) {
    const Dataset data = load_dataset(data_path);
    FitSpec spec = build_fit_spec(flags);

    std::optional<BandwidthSelection> selection;
    if (spec.mode == RegressionMode::Local && !spec.bandwidth.has_value()) {
        const std::vector<double> grid = spec.cv_grid.has_value() ? *spec.cv_grid : default_bandwidth_grid(data);
        selection = select_bandwidth_loocv(data, spec.metric, spec.kernel_family, grid, spec.qp);
        spec.bandwidth = selection->best;
    }
    const FittedModel model = fit_with_spec(data, spec);
    save_model(model, out_path);

    if (!common.quiet && selection.has_value()) {
        std::cout << "leave-one-out criterion by bandwidth:\n";
        for (size_t i = 0; i < selection->grid.size(); ++i) {
            std::cout << "  h = " << format_double(selection->grid[i]) << "  criterion = ";
            if (std::isnan(selection->criteria[i]))
                std::cout << "skipped\n";
            else
                std::cout << format_double(selection->criteria[i]) << "\n";
        }
        std::cout << "selected h = " << format_double(selection->best) << "\n";
    }
    const double r2 = frechet_r2(model);
    if (!common.quiet) std::cout << "Frechet R^2 = " << format_double(r2) << "\n";
    if (!common.quiet) std::cout << "wrote model to " << out_path << "\n";
    return 0;
}

int run_predict(const std::string& model_path, const std::string& query_path, const std::string& out_path,
                const std::string& heatmap_dir, const CommonFlags& common) {
    const FittedModel model = load_model(model_path);
    const std::vector<std::vector<double>> queries = load_queries(query_path);

    std::string lines;
    std::vector<Matrix> outputs;
    outputs.reserve(queries.size());
    try {
        GraphLaplacian warm =
            GraphLaplacian::unchecked(Matrix(model.data().node_count(), model.data().node_count()),
                                      model.data().bound());
        for (const std::vector<double>& query : queries) {
            warm = model.predict(query, nullptr, &warm);
            outputs.push_back(warm.entries());
        }
    } catch (const Error& error) {
        std::cerr << "prediction failed: " << error.what() << "\n";
        return 4;
    }

    std::ostringstream out;
    for (size_t k = 0; k < queries.size(); ++k) {
        nlohmann::ordered_json row;
        row["x"] = queries[k];
        nlohmann::ordered_json l = nlohmann::ordered_json::array();
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        const Matrix& mat = outputs[k];
        const AdjacencyMatrix adjacency =
            adjacency_from_laplacian(GraphLaplacian::unchecked(mat, model.data().bound()));
        for (int i = 0; i < mat.rows(); ++i) {
            nlohmann::ordered_json lrow = nlohmann::ordered_json::array();
            nlohmann::ordered_json arow = nlohmann::ordered_json::array();
            for (int j = 0; j < mat.cols(); ++j) {
                lrow.push_back(mat(i, j));
                arow.push_back(adjacency.weights()(i, j));
            }
            l.push_back(std::move(lrow));
            a.push_back(std::move(arow));
        }
        row["L"] = std::move(l);
        row["adjacency"] = std::move(a);
        out << row.dump() << '\n';
    }
    write_text_file(out_path, out.str());

    if (!heatmap_dir.empty()) {
        std::filesystem::create_directories(heatmap_dir);
        for (size_t k = 0; k < outputs.size(); ++k) {
            char name[32];
            std::snprintf(name, sizeof(name), "query_%04zu.csv", k);
            write_text_file((std::filesystem::path(heatmap_dir) / name).string(), matrix_to_csv(outputs[k]));
        }
    }
    if (!common.quiet) std::cout << "wrote " << queries.size() << " predictions to " << out_path << "\n";
    return 0;
}

int run_evaluate_mise(const std::string& scenario_flag, const std::string& n_list, int runs, uint64_t seed,
                      int m, FitFlags flags, bool mode_given, bool metric_given, const std::string& design,
                      const std::string& out_path, const CommonFlags& common) {
    const Scenario scenario = scenario_from_string(scenario_flag);
    if (!mode_given) {
        flags.mode = (scenario == Scenario::I || scenario == Scenario::II) ? "global" : "local";
    }
    if (!metric_given) {
        flags.metric = (scenario == Scenario::II || scenario == Scenario::IV) ? "power" : "frobenius";
    }
    const FitSpec spec = build_fit_spec(flags);
    const std::vector<int> sizes = parse_int_list(n_list);
    const PredictorDesign parsed_design =
        design == "random" ? PredictorDesign::Random : PredictorDesign::Equispaced;
    const MonteCarloReport report =
        mise_experiment(scenario, sizes, runs, spec, seed, m, common.threads, parsed_design);

    if (!common.quiet) {
        std::cout << "scenario " << scenario_name(scenario) << ", " << flags.mode << " regression, "
                  << flags.metric << " metric, " << runs << " runs\n";
        std::cout << "      n        MISE          SE\n";
        for (const auto& row : report.per_n)
            std::printf("%7d  %10.4f  %10.4f\n", row.sample_size, row.mise, row.se);
        if (std::isfinite(report.slope)) std::printf("log-log slope: %.4f\n", report.slope);
    }
    if (!out_path.empty()) write_text_file(out_path, report_to_json(report, spec));
    return 0;
}

int run_evaluate_mspe(const std::string& data_path, const FitFlags& flags, int folds, int repeats,
                      uint64_t seed, const std::string& out_path, const CommonFlags& common) {
    const Dataset data = load_dataset(data_path);
    const FitSpec spec = build_fit_spec(flags);
    const double mspe = mspe_cv(data, spec, folds, repeats, seed);
    if (!common.quiet) std::cout << "MSPE = " << format_double(mspe) << "\n";
    if (!out_path.empty()) {
        nlohmann::ordered_json out;
        out["mspe"] = mspe;
        out["folds"] = folds;
        out["repeats"] = repeats;
        out["seed"] = seed;
        out["mode"] = flags.mode;
        out["metric"] = flags.metric;
        write_text_file(out_path, out.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frechet regression for network responses represented as graph Laplacians"};
    app.require_subcommand(1);

    CommonFlags common;
    app.add_option("--threads", common.threads, "Worker threads for Monte Carlo evaluation")->capture_default_str();
    app.add_flag("--quiet", common.quiet, "Suppress informational output");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a dataset from one of the built-in scenarios");
    simulate->fallthrough();
    std::string scenario_flag = "I";
    int sim_n = 100;
    int sim_m = 10;
    uint64_t sim_seed = 0;
    WsbmSpec wsbm;
    std::string wsbm_flavor = "global";
    std::string sim_out;
    simulate->add_option("--scenario", scenario_flag, "I, II, III, IV or wsbm")->required();
    simulate->add_option("--n", sim_n, "Sample size")->required();
    simulate->add_option("--m", sim_m, "Nodes per network")->capture_default_str();
    simulate->add_option("--seed", sim_seed, "Master seed")->capture_default_str();
    simulate->add_option("--m1", wsbm.block1, "WSBM first block size")->capture_default_str();
    simulate->add_option("--m2", wsbm.block2, "WSBM second block size")->capture_default_str();
    simulate->add_option("--p11", wsbm.p11, "WSBM within-block edge probability (block 1)")->capture_default_str();
    simulate->add_option("--p12", wsbm.p12, "WSBM between-block edge probability")->capture_default_str();
    simulate->add_option("--p22", wsbm.p22, "WSBM within-block edge probability (block 2)")->capture_default_str();
    simulate->add_option("--wsbm-flavor", wsbm_flavor, "global, local or global-sqrt")
        ->check(CLI::IsMember({"global", "local", "global-sqrt"}));
    std::string sim_design = "random";
    simulate->add_option("--design", sim_design, "Predictor design: random (U(0,1) draws) or equispaced")
        ->check(CLI::IsMember({"random", "equispaced"}));
    simulate->add_option("--out", sim_out, "Output dataset (JSON Lines)")->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit a network regression model");
    fit_cmd->fallthrough();
    std::string fit_data;
    std::string fit_out;
    uint64_t fit_seed = 0;
    FitFlags fit_flags;
    fit_cmd->add_option("--data", fit_data, "Training dataset (JSON Lines)")->required();
    add_fit_flags(fit_cmd, fit_flags);
    fit_cmd->add_option("--seed", fit_seed, "Reserved; fitting is deterministic");
    fit_cmd->add_option("--out", fit_out, "Output model file")->required();

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Predict networks at new predictor values");
    predict_cmd->fallthrough();
    std::string predict_model, predict_queries, predict_out, heatmap_dir;
    predict_cmd->add_option("--model", predict_model, "Model file from 'fit'")->required();
    predict_cmd->add_option("--queries", predict_queries, "JSON Lines with one {\"x\": ...} per line")->required();
    predict_cmd->add_option("--out", predict_out, "Output predictions (JSON Lines)")->required();
    predict_cmd->add_option("--heatmap-csv", heatmap_dir, "Also write one m x m CSV per query into this directory");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo error tables and cross-validated prediction error");
    evaluate->fallthrough();
    evaluate->require_subcommand(1);

    auto* mise = evaluate->add_subcommand("mise", "Mean integrated squared error against the scenario target");
    mise->fallthrough();
    std::string mise_scenario = "I";
    std::string mise_n = "50,100,200";
    int mise_runs = 200;
    uint64_t mise_seed = 1;
    int mise_m = 10;
    std::string mise_out;
    FitFlags mise_flags;
    mise->add_option("--scenario", mise_scenario, "I, II, III or IV")->required();
    mise->add_option("--n", mise_n, "Comma-separated sample sizes")->capture_default_str();
    mise->add_option("--runs", mise_runs, "Monte Carlo replicates per sample size")->capture_default_str();
    mise->add_option("--seed", mise_seed, "Master seed")->capture_default_str();
    mise->add_option("--m", mise_m, "Nodes per network")->capture_default_str();
    add_fit_flags(mise, mise_flags);
    std::string mise_design = "equispaced";
    mise->add_option("--design", mise_design,
                     "Predictor design for the simulated replicates (reference tables use equispaced)")
        ->check(CLI::IsMember({"random", "equispaced"}));
    mise->add_option("--out", mise_out, "Write the report JSON here");

    auto* mspe = evaluate->add_subcommand("mspe", "K-fold cross-validated mean squared prediction error");
    mspe->fallthrough();
    std::string mspe_data;
    int mspe_folds = 10;
    int mspe_repeats = 100;
    uint64_t mspe_seed = 1;
    std::string mspe_out;
    FitFlags mspe_flags;
    mspe->add_option("--data", mspe_data, "Dataset (JSON Lines)")->required();
    add_fit_flags(mspe, mspe_flags);
    mspe->add_option("--folds", mspe_folds, "Folds")->capture_default_str();
    mspe->add_option("--repeats", mspe_repeats, "Shuffle repeats")->capture_default_str();
    mspe->add_option("--seed", mspe_seed, "Master seed")->capture_default_str();
    mspe->add_option("--out", mspe_out, "Write the report JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        if (error.get_exit_code() == 0) return app.exit(error);  // --help
        app.exit(error);
        return 2;
    }

    try {
        if (simulate->parsed()) {
            if (wsbm_flavor == "local")
                wsbm.flavor = WsbmFlavor::Local;
            else if (wsbm_flavor == "global-sqrt")
                wsbm.flavor = WsbmFlavor::GlobalSqrt;
            return run_simulate(scenario_flag, sim_n, sim_m, sim_seed, wsbm, sim_design, sim_out, common);
        }
        if (fit_cmd->parsed()) return run_fit(fit_data, fit_flags, fit_out, common);
        if (predict_cmd->parsed())
            return run_predict(predict_model, predict_queries, predict_out, heatmap_dir, common);
        if (evaluate->parsed()) {
            if (mise->parsed())
                return run_evaluate_mise(mise_scenario, mise_n, mise_runs, mise_seed, mise_m, mise_flags,
                                         mise->count("--mode") > 0, mise->count("--metric") > 0, mise_design,
                                         mise_out, common);
            if (mspe->parsed())
                return run_evaluate_mspe(mspe_data, mspe_flags, mspe_folds, mspe_repeats, mspe_seed, mspe_out,
                                         common);
        }
    } catch (const lapreg::Error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return exit_code_for(error.code());
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
    return 1;
}
