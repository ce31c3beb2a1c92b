#include "lapreg/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "lapreg/errors.hpp"
#include "lapreg/rng.hpp"
#include "lapreg/spectral.hpp"

namespace lapreg {

namespace {

constexpr uint64_t kScenarioIvTruthSeed = 0x7a11ac1a4ULL;
constexpr int kScenarioIvTruthDraws = 100000;
constexpr double kPi = 3.14159265358979323846;

double draw_open_unit(Rng& rng) { return rng.uniform_open(); }

std::vector<double> draw_beta_half_vector(Rng& rng, double shape_a, int node_count) {
    const size_t d = static_cast<size_t>(node_count) * (node_count - 1) / 2;
    std::vector<double> values(d);
    for (double& value : values) value = -rng.beta(shape_a, 1.0 - shape_a);
    return values;
}

Matrix complete_graph_target(double magnitude, int node_count) {
    const size_t d = static_cast<size_t>(node_count) * (node_count - 1) / 2;
    return centered_from_strict_upper(std::vector<double>(d, -magnitude), node_count);
}

GraphLaplacian power_pipeline_target(const Matrix& pre_embedding, int node_count, double bound) {
    const EmbeddingSpace space = EmbeddingSpace::with_gershgorin_cap(node_count, bound, 0.5);
    const Matrix embedded = project_embedding(pre_embedding, space);
    const Matrix unsquared = matrix_power(embedded, 2.0);
    LaplacianProjection projection = project_laplacian(unsquared, bound);
    if (!projection.converged) fail(ErrorCode::NoConvergence, "target projection stalled");
    return std::move(projection.laplacian);
}

}  // namespace

Scenario scenario_from_string(const std::string& name) {
    if (name == "I" || name == "i" || name == "1") return Scenario::I;
    if (name == "II" || name == "ii" || name == "2") return Scenario::II;
    if (name == "III" || name == "iii" || name == "3") return Scenario::III;
    if (name == "IV" || name == "iv" || name == "4") return Scenario::IV;
    if (name == "wsbm" || name == "WSBM") return Scenario::WSBM;
    fail(ErrorCode::BadConfig, "unknown scenario '" + name + "'");
}

std::string scenario_name(Scenario scenario) {
    switch (scenario) {
        case Scenario::I: return "I";
        case Scenario::II: return "II";
        case Scenario::III: return "III";
        case Scenario::IV: return "IV";
        case Scenario::WSBM: return "wsbm";
    }
    return "?";
}

void ScenarioSpec::validate() const {
    if (sample_size < 2) fail(ErrorCode::BadConfig, "sample size must be at least 2");
    if (node_count < 2) fail(ErrorCode::BadConfig, "node count must be at least 2");
    if (scenario == Scenario::WSBM) {
        if (wsbm.block1 < 1 || wsbm.block2 < 1 || wsbm.block1 + wsbm.block2 != node_count)
            fail(ErrorCode::BadConfig, "WSBM block sizes must be positive and sum to the node count");
        for (double p : {wsbm.p11, wsbm.p12, wsbm.p22})
            if (p < 0.0 || p > 1.0) fail(ErrorCode::BadConfig, "WSBM edge probabilities must lie in [0, 1]");
    }
}

Dataset simulate_scenario(const ScenarioSpec& spec) {
    spec.validate();
    if (spec.scenario == Scenario::WSBM) return wsbm_sample(spec);

    const int n = spec.sample_size;
    const int m = spec.node_count;
    Rng rng(spec.seed);
    Matrix predictors(n, 1);
    std::vector<Matrix> responses;
    responses.reserve(static_cast<size_t>(n));

    for (int k = 0; k < n; ++k) {
        const double x =
            spec.design == PredictorDesign::Equispaced ? (k + 0.5) / n : draw_open_unit(rng);
        predictors(k, 0) = x;
        double shape;
        switch (spec.scenario) {
            case Scenario::I: shape = x; break;
            case Scenario::II: shape = 0.1 * x; break;
            default: shape = std::sin(kPi * x); break;  // III and IV share the response law
        }
        const std::vector<double> half = draw_beta_half_vector(rng, shape, m);
        Matrix laplacian = centered_from_strict_upper(half, m);
        if (spec.scenario == Scenario::II) {
            responses.push_back(matmul(laplacian, laplacian));
        } else {
            responses.push_back(std::move(laplacian));
        }
    }

    if (spec.scenario == Scenario::II)
        return Dataset::from_raw(std::move(predictors), std::move(responses), std::nullopt,
                                 ResponseSpace::SquaredLaplacian);
    return Dataset::from_raw(std::move(predictors), std::move(responses), 1.0, ResponseSpace::Laplacian);
}

Dataset wsbm_sample(const ScenarioSpec& spec) {
    spec.validate();
    if (spec.scenario != Scenario::WSBM) fail(ErrorCode::BadConfig, "wsbm_sample needs a WSBM spec");

    const int n = spec.sample_size;
    const int m = spec.node_count;
    const WsbmSpec& wsbm = spec.wsbm;
    Rng rng(spec.seed);
    Matrix predictors(n, 1);
    std::vector<Matrix> responses;
    responses.reserve(static_cast<size_t>(n));

    auto edge_probability = [&](int i, int j) {
        const bool left = i < wsbm.block1;
        const bool right = j < wsbm.block1;
        if (left && right) return wsbm.p11;
        if (!left && !right) return wsbm.p22;
        return wsbm.p12;
    };

    for (int k = 0; k < n; ++k) {
        const double x =
            spec.design == PredictorDesign::Equispaced ? (k + 0.5) / n : draw_open_unit(rng);
        predictors(k, 0) = x;
        const double shape = wsbm.flavor == WsbmFlavor::Local ? std::sin(kPi * x) : x;
        Matrix weights(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                if (!rng.bernoulli(edge_probability(i, j))) continue;
                const double weight = rng.beta(shape, 1.0 - shape);
                weights(i, j) = weight;
                weights(j, i) = weight;
            }
        GraphLaplacian laplacian = laplacian_from_adjacency(AdjacencyMatrix::unchecked(std::move(weights), 1.0));
        if (wsbm.flavor == WsbmFlavor::GlobalSqrt) {
            responses.push_back(matmul(laplacian.entries(), laplacian.entries()));
        } else {
            responses.push_back(laplacian.entries());
        }
    }

    if (wsbm.flavor == WsbmFlavor::GlobalSqrt)
        return Dataset::from_raw(std::move(predictors), std::move(responses), std::nullopt,
                                 ResponseSpace::SquaredLaplacian);
    return Dataset::from_raw(std::move(predictors), std::move(responses), 1.0, ResponseSpace::Laplacian);
}

GraphLaplacian scenario_iv_target_mc(double x, int node_count, int draws, uint64_t seed) {
    if (draws < 1) fail(ErrorCode::BadConfig, "need at least one draw");
    const double shape = std::sin(kPi * x);
    Rng rng(seed);
    Matrix mean_root(node_count, node_count);
    for (int q = 0; q < draws; ++q) {
        const std::vector<double> half = draw_beta_half_vector(rng, shape, node_count);
        const Matrix root = matrix_power(centered_from_strict_upper(half, node_count), 0.5);
        for (size_t idx = 0; idx < root.size(); ++idx) mean_root.data()[idx] += root.data()[idx];
    }
    mean_root *= 1.0 / draws;
    return power_pipeline_target(mean_root, node_count, 1.0);
}

GraphLaplacian true_target(Scenario scenario, double x, int node_count) {
    if (!(x > 0.0 && x < 1.0)) fail(ErrorCode::BadInput, "target defined for x in (0, 1)");
    if (node_count < 2) fail(ErrorCode::BadConfig, "node count must be at least 2");
    switch (scenario) {
        case Scenario::I:
            return GraphLaplacian::unchecked(complete_graph_target(x, node_count), 1.0);
        case Scenario::II:
            return power_pipeline_target(complete_graph_target(0.1 * x, node_count), node_count, 1.0);
        case Scenario::III:
            return GraphLaplacian::unchecked(complete_graph_target(std::sin(kPi * x), node_count), 1.0);
        case Scenario::IV: {
            static std::mutex guard;
            static std::map<std::pair<int, uint64_t>, GraphLaplacian> cache;
            const auto key = std::make_pair(node_count, std::bit_cast<uint64_t>(x));
            {
                std::lock_guard<std::mutex> lock(guard);
                auto found = cache.find(key);
                if (found != cache.end()) return found->second;
            }
            GraphLaplacian target = scenario_iv_target_mc(
                x, node_count, kScenarioIvTruthDraws,
                derive_stream_seed(kScenarioIvTruthSeed, {static_cast<uint64_t>(node_count), key.second}));
            std::lock_guard<std::mutex> lock(guard);
            return cache.emplace(key, std::move(target)).first->second;
        }
        case Scenario::WSBM:
            fail(ErrorCode::BadConfig, "no closed-form target for WSBM samples");
    }
    fail(ErrorCode::BadConfig, "unreachable scenario");
}

double integrated_squared_error(const std::function<Matrix(double)>& fitted, Scenario scenario,
                                int node_count, std::span<const double> grid) {
    if (grid.empty()) fail(ErrorCode::BadInput, "ISE grid is empty");
    std::vector<double> points(grid.begin(), grid.end());
    std::sort(points.begin(), points.end());
    if (points.front() <= 0.0 || points.back() >= 1.0)
        fail(ErrorCode::BadInput, "ISE grid must lie inside (0, 1)");

    std::vector<double> values(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        const GraphLaplacian target = true_target(scenario, points[i], node_count);
        const double gap = frobenius_norm(target.entries() - fitted(points[i]));
        values[i] = gap * gap;
    }
    double integral = 0.0;
    for (size_t i = 0; i + 1 < points.size(); ++i)
        integral += 0.5 * (values[i] + values[i + 1]) * (points[i + 1] - points[i]);
    return integral;
}

std::vector<double> default_ise_grid() {
    std::vector<double> grid(101);
    for (int i = 0; i <= 100; ++i) grid[static_cast<size_t>(i)] = 0.005 + 0.0099 * i;
    return grid;
}

namespace {

double replicate_ise(Scenario scenario, int sample_size, int node_count, const FitSpec& fit_spec,
                     uint64_t replicate_seed, std::span<const double> grid, PredictorDesign design) {
    ScenarioSpec spec;
    spec.scenario = scenario;
    spec.sample_size = sample_size;
    spec.node_count = node_count;
    spec.seed = replicate_seed;
    spec.design = design;
    const Dataset data = simulate_scenario(spec);
    const FittedModel model = fit_with_spec(data, fit_spec);

    GraphLaplacian warm = GraphLaplacian::unchecked(Matrix(node_count, node_count), data.bound());
    auto fitted = [&](double x) {
        const double query[1] = {x};
        warm = model.predict(query, nullptr, &warm);
        return warm.entries();
    };
    return integrated_squared_error(fitted, scenario, node_count, grid);
}

}  // namespace

MonteCarloReport mise_experiment(Scenario scenario, std::span<const int> sample_sizes, int runs,
                                 const FitSpec& fit_spec, uint64_t seed, int node_count, int threads,
                                 PredictorDesign design) {
    if (runs < 2) fail(ErrorCode::BadConfig, "need at least two runs");
    if (sample_sizes.empty()) fail(ErrorCode::BadConfig, "need at least one sample size");
    if (scenario == Scenario::WSBM) fail(ErrorCode::BadConfig, "MISE experiments need a closed-form target");
    for (int n : sample_sizes)
        if (n < 2) fail(ErrorCode::BadConfig, "sample sizes must be at least 2");
    if (threads < 1) threads = 1;

    const std::vector<double> grid = default_ise_grid();
    const uint64_t scenario_id = static_cast<uint64_t>(scenario);

    // Scenario IV: fill the target cache up front so worker threads only read it.
    if (scenario == Scenario::IV) {
        std::atomic<size_t> next{0};
        auto prefill = [&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= grid.size()) return;
                true_target(scenario, grid[i], node_count);
            }
        };
        std::vector<std::thread> workers;
        for (int t = 1; t < threads; ++t) workers.emplace_back(prefill);
        prefill();
        for (std::thread& worker : workers) worker.join();
    }

    MonteCarloReport report;
    report.scenario = scenario;
    report.node_count = node_count;
    report.runs = runs;
    report.seed = seed;
    report.per_n.resize(sample_sizes.size());
    for (size_t i = 0; i < sample_sizes.size(); ++i) {
        report.per_n[i].sample_size = sample_sizes[i];
        report.per_n[i].ise.assign(static_cast<size_t>(runs), 0.0);
    }

    const size_t total_tasks = sample_sizes.size() * static_cast<size_t>(runs);
    std::atomic<size_t> next_task{0};
    std::mutex failure_guard;
    std::string failure;
    ErrorCode failure_code = ErrorCode::NoConvergence;

    auto worker = [&] {
        for (;;) {
            const size_t task = next_task.fetch_add(1);
            if (task >= total_tasks) return;
            const size_t n_index = task / static_cast<size_t>(runs);
            const int replicate = static_cast<int>(task % static_cast<size_t>(runs));
            const int n = sample_sizes[n_index];
            const uint64_t replicate_seed = derive_stream_seed(
                seed, {scenario_id, static_cast<uint64_t>(n), static_cast<uint64_t>(replicate)});
            try {
                report.per_n[n_index].ise[static_cast<size_t>(replicate)] =
                    replicate_ise(scenario, n, node_count, fit_spec, replicate_seed, grid, design);
            } catch (const std::exception& error) {
                std::lock_guard<std::mutex> lock(failure_guard);
                if (failure.empty()) {
                    failure = "replicate " + std::to_string(replicate) + " (n = " + std::to_string(n) +
                              ", seed = " + std::to_string(replicate_seed) + ") failed: " + error.what();
                    if (const auto* typed = dynamic_cast<const Error*>(&error)) failure_code = typed->code();
                }
                return;
            }
        }
    };

    std::vector<std::thread> workers;
    for (int t = 1; t < threads; ++t) workers.emplace_back(worker);
    worker();
    for (std::thread& thread : workers) thread.join();
    if (!failure.empty()) fail(failure_code, failure);

    for (auto& row : report.per_n) {
        double sum = 0.0;
        for (double value : row.ise) sum += value;
        row.mise = sum / runs;
        double ss = 0.0;
        for (double value : row.ise) ss += (value - row.mise) * (value - row.mise);
        row.se = std::sqrt(ss / (runs - 1)) / std::sqrt(static_cast<double>(runs));
    }
    report.slope = report.per_n.size() >= 3 ? convergence_slope(report)
                                            : std::numeric_limits<double>::quiet_NaN();
    return report;
}

double convergence_slope(const MonteCarloReport& report) {
    if (report.per_n.size() < 3) fail(ErrorCode::BadConfig, "slope needs at least three sample sizes");
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& row : report.per_n) {
        mean_x += std::log(static_cast<double>(row.sample_size));
        mean_y += std::log(row.mise);
    }
    mean_x /= static_cast<double>(report.per_n.size());
    mean_y /= static_cast<double>(report.per_n.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& row : report.per_n) {
        const double dx = std::log(static_cast<double>(row.sample_size)) - mean_x;
        sxx += dx * dx;
        sxy += dx * (std::log(row.mise) - mean_y);
    }
    if (sxx <= 0.0) fail(ErrorCode::DegenerateFit, "all sample sizes equal");
    return sxy / sxx;
}

}  // namespace lapreg
