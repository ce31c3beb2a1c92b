#include "lapreg/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lapreg/errors.hpp"
#include "lapreg/rng.hpp"
#include "lapreg/spectral.hpp"

namespace lapreg {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr double kSigmaZeroRelTol = 1e-12;

void check_finite(const Matrix& mat, const char* what) {
    for (size_t k = 0; k < mat.size(); ++k)
        if (!std::isfinite(mat.data()[k])) fail(ErrorCode::BadInput, std::string(what) + " contains a non-finite entry");
}

void validate_squared_space(const Matrix& raw, double bound) {
    const int m = raw.rows();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::fabs(raw(i, j) - raw(j, i)) > kSymmetryTol)
                fail(ErrorCode::NotSymmetric, "asymmetry above tolerance at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            if (std::fabs(raw(i, j)) > bound + kOffDiagonalTol)
                fail(ErrorCode::OffDiagonalOutOfBox, "off-diagonal magnitude above W at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    const double row_tol = kRowSumTolFactor * m * bound;
    for (int i = 0; i < m; ++i) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) sum += raw(i, j);
        if (std::fabs(sum) > row_tol)
            fail(ErrorCode::RowSumNonZero, "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
}

struct GlobalMoments {
    std::vector<double> mean;
    Matrix cov_inverse;
};

GlobalMoments compute_global_moments(const Dataset& data) {
    const int n = data.sample_size();
    const int p = data.predictor_dim();
    GlobalMoments moments;
    moments.mean.assign(p, 0.0);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < p; ++j) moments.mean[j] += data.predictor(k, j);
    for (double& value : moments.mean) value /= n;

    Matrix cov(p, p);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < p; ++i) {
            const double di = data.predictor(k, i) - moments.mean[i];
            for (int j = i; j < p; ++j) cov(i, j) += di * (data.predictor(k, j) - moments.mean[j]);
        }
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) {
            cov(i, j) /= n;
            cov(j, i) = cov(i, j);
        }

    SpectralDecomposition decomp = sym_eigen(cov);
    const double largest = decomp.eigenvalues.front();
    const double smallest = decomp.eigenvalues.back();
    if (largest <= 0.0 || smallest <= 0.0 || largest / smallest > kConditionLimit)
        fail(ErrorCode::SingularDesign, "predictor covariance condition number above 1e12");
    moments.cov_inverse = Matrix(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) {
            double sum = 0.0;
            for (int k = 0; k < p; ++k)
                sum += decomp.eigenvectors(i, k) * decomp.eigenvectors(j, k) / decomp.eigenvalues[k];
            moments.cov_inverse(i, j) = sum;
            moments.cov_inverse(j, i) = sum;
        }
    return moments;
}

std::vector<double> global_weights_from(const Dataset& data, const GlobalMoments& moments,
                                        std::span<const double> x) {
    const int n = data.sample_size();
    const int p = data.predictor_dim();
    if (static_cast<int>(x.size()) != p) fail(ErrorCode::DimensionMismatch, "query dimension does not match predictors");
    std::vector<double> direction(p, 0.0);
    for (int i = 0; i < p; ++i) {
        double sum = 0.0;
        for (int j = 0; j < p; ++j) sum += moments.cov_inverse(i, j) * (x[j] - moments.mean[j]);
        direction[i] = sum;
    }
    std::vector<double> weights(n);
    for (int k = 0; k < n; ++k) {
        double dot = 0.0;
        for (int i = 0; i < p; ++i) dot += (data.predictor(k, i) - moments.mean[i]) * direction[i];
        weights[k] = 1.0 + dot;
    }
    return weights;
}

// Local linear weights over the sample minus one optional held-out index.
// The returned vector has length n with 0 at the excluded position.
std::vector<double> local_weights_impl(const Dataset& data, double x, const KernelSpec& kernel, int exclude) {
    if (data.predictor_dim() != 1)
        fail(ErrorCode::LocalNeedsScalarPredictor, "local regression requires a scalar predictor");
    if (kernel.bandwidth <= 0.0) fail(ErrorCode::BadConfig, "bandwidth must be positive");
    const int n = data.sample_size();
    const double h = kernel.bandwidth;
    const int count = exclude >= 0 ? n - 1 : n;

    double mu0 = 0.0, mu1 = 0.0, mu2 = 0.0;
    std::vector<double> kernels(n, 0.0);
    for (int k = 0; k < n; ++k) {
        if (k == exclude) continue;
        const double delta = data.predictor(k, 0) - x;
        const double kh = kernel_value(kernel.family, delta / h) / h;
        kernels[k] = kh;
        mu0 += kh;
        mu1 += kh * delta;
        mu2 += kh * delta * delta;
    }
    mu0 /= count;
    mu1 /= count;
    mu2 /= count;
    const double sigma0sq = mu0 * mu2 - mu1 * mu1;
    if (!(sigma0sq > kSigmaZeroRelTol * mu0 * mu2))
        fail(ErrorCode::BandwidthTooSmall, "no effective neighbors at x = " + std::to_string(x) +
                                               " with h = " + std::to_string(h));
    std::vector<double> weights(n, 0.0);
    for (int k = 0; k < n; ++k) {
        if (k == exclude) continue;
        const double delta = data.predictor(k, 0) - x;
        weights[k] = kernels[k] * (mu2 - mu1 * delta) / sigma0sq;
    }
    return weights;
}

// Weighted Frechet point: the projected weighted mean under the Frobenius
// metric, or embed / average / cap / unpower / project under a power
// metric. `images` must hold the alpha-th powers of the responses when the
// metric is a power metric.
GraphLaplacian weighted_frechet_point(std::span<const Matrix> responses, double bound, const MetricSpec& metric,
                                      const std::vector<Matrix>* images, double cap, const QPSettings& qp,
                                      std::span<const double> weights, double denom, int exclude,
                                      PredictionDiagnostics* diagnostics, const GraphLaplacian* warm_start) {
    const int m = responses.front().rows();
    Matrix average(m, m);
    for (size_t k = 0; k < responses.size(); ++k) {
        if (static_cast<int>(k) == exclude || weights[k] == 0.0) continue;
        const Matrix& term = metric.is_power() ? (*images)[k] : responses[k];
        const double scale = weights[k] / denom;
        for (size_t idx = 0; idx < term.size(); ++idx) average.data()[idx] += scale * term.data()[idx];
    }

    Matrix target = metric.is_power()
                        ? matrix_power(project_embedding(average, EmbeddingSpace{m, cap}), 1.0 / metric.alpha)
                        : std::move(average);

    LaplacianProjection projection = project_laplacian(target, bound, qp, warm_start);
    if (!projection.converged)
        fail(ErrorCode::NoConvergence, "laplacian projection stalled at residual " + std::to_string(projection.residual));
    if (diagnostics != nullptr) {
        diagnostics->weights.assign(weights.begin(), weights.end());
        diagnostics->projection_residual = frobenius_norm(target - projection.laplacian.entries());
        diagnostics->target = std::move(target);
        diagnostics->qp_converged = projection.converged;
        diagnostics->qp_iterations = projection.iterations;
    }
    return std::move(projection.laplacian);
}

std::vector<Matrix> power_images_for(std::span<const Matrix> responses, double alpha) {
    std::vector<Matrix> images;
    images.reserve(responses.size());
    for (const Matrix& response : responses) images.push_back(matrix_power(response, alpha));
    return images;
}

}  // namespace

double kernel_value(KernelFamily family, double u) {
    switch (family) {
        case KernelFamily::Gaussian: return std::exp(-0.5 * u * u) * 0.3989422804014326779;
        case KernelFamily::Epanechnikov: return std::fabs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    }
    return 0.0;
}

Dataset Dataset::create(Matrix predictors, std::vector<GraphLaplacian> responses) {
    std::vector<Matrix> raw;
    raw.reserve(responses.size());
    double bound = 0.0;
    for (const GraphLaplacian& response : responses) {
        bound = std::max(bound, response.bound());
        raw.push_back(response.entries());
    }
    return from_raw(std::move(predictors), std::move(raw), bound, ResponseSpace::Laplacian);
}

Dataset Dataset::from_raw(Matrix predictors, std::vector<Matrix> responses, std::optional<double> bound,
                          ResponseSpace space) {
    if (predictors.rows() < 2) fail(ErrorCode::BadInput, "need at least two observations");
    if (predictors.cols() < 1) fail(ErrorCode::BadInput, "need at least one predictor column");
    if (responses.size() != static_cast<size_t>(predictors.rows()))
        fail(ErrorCode::DimensionMismatch, "predictor and response counts differ");
    check_finite(predictors, "predictors");

    const int m = responses.front().rows();
    for (const Matrix& response : responses) {
        if (!response.square() || response.rows() != m)
            fail(ErrorCode::DimensionMismatch, "responses must share one node count");
        check_finite(response, "response");
    }

    double w = 0.0;
    if (bound.has_value()) {
        if (*bound < 0.0) fail(ErrorCode::BadInput, "bound W must be nonnegative");
        w = *bound;
    } else {
        for (const Matrix& response : responses)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    if (i != j) w = std::max(w, std::fabs(response(i, j)));
    }

    Dataset data;
    data.responses_.reserve(responses.size());
    for (size_t k = 0; k < responses.size(); ++k) {
        if (space == ResponseSpace::Laplacian) {
            try {
                data.responses_.push_back(GraphLaplacian::validated(responses[k], w).entries());
            } catch (const Error& error) {
                fail(error.code(), "response " + std::to_string(k) + ": " + error.what());
            }
        } else {
            try {
                validate_squared_space(responses[k], w);
            } catch (const Error& error) {
                fail(error.code(), "response " + std::to_string(k) + ": " + error.what());
            }
            data.responses_.push_back(responses[k].symmetrized());
        }
    }
    data.predictors_ = std::move(predictors);
    data.node_count_ = m;
    data.bound_ = w;
    data.space_ = space;
    return data;
}

Dataset Dataset::subset(std::span<const int> indices) const {
    if (indices.size() < 2) fail(ErrorCode::BadInput, "subset needs at least two observations");
    Dataset out;
    out.predictors_ = Matrix(static_cast<int>(indices.size()), predictor_dim());
    out.responses_.reserve(indices.size());
    for (size_t row = 0; row < indices.size(); ++row) {
        const int k = indices[row];
        for (int j = 0; j < predictor_dim(); ++j) out.predictors_(static_cast<int>(row), j) = predictors_(k, j);
        out.responses_.push_back(responses_[static_cast<size_t>(k)]);
    }
    out.node_count_ = node_count_;
    out.bound_ = bound_;
    out.space_ = space_;
    return out;
}

std::vector<double> global_weights(const Dataset& data, std::span<const double> x) {
    return global_weights_from(data, compute_global_moments(data), x);
}

std::vector<double> local_weights(const Dataset& data, double x, const KernelSpec& kernel) {
    return local_weights_impl(data, x, kernel, -1);
}

FittedModel fit(Dataset data, RegressionMode mode, const MetricSpec& metric, std::optional<KernelSpec> kernel,
                std::optional<double> cap_override, const QPSettings& qp) {
    FittedModel model;
    if (mode == RegressionMode::Local) {
        if (data.predictor_dim() != 1)
            fail(ErrorCode::LocalNeedsScalarPredictor, "local regression requires a scalar predictor");
        if (!kernel.has_value() || kernel->bandwidth <= 0.0)
            fail(ErrorCode::BadConfig, "local regression needs a kernel with a positive bandwidth");
    } else {
        GlobalMoments moments = compute_global_moments(data);
        model.mean_predictor_ = std::move(moments.mean);
        model.covariance_inverse_ = std::move(moments.cov_inverse);
    }
    if (metric.is_power()) {
        model.power_images_ = power_images_for(data.responses(), metric.alpha);
        model.embedding_cap_ = cap_override.value_or(
            EmbeddingSpace::with_gershgorin_cap(data.node_count(), data.bound(), metric.alpha).cap);
    }
    model.data_ = std::move(data);
    model.mode_ = mode;
    model.metric_ = metric;
    model.kernel_ = kernel;
    model.qp_ = qp;
    return model;
}

GraphLaplacian FittedModel::predict(std::span<const double> x) const { return predict(x, nullptr); }

GraphLaplacian FittedModel::predict(std::span<const double> x, PredictionDiagnostics* diagnostics,
                                    const GraphLaplacian* warm_start) const {
    std::vector<double> weights;
    if (mode_ == RegressionMode::Global) {
        GlobalMoments moments{mean_predictor_, covariance_inverse_};
        weights = global_weights_from(data_, moments, x);
    } else {
        if (x.size() != 1) fail(ErrorCode::DimensionMismatch, "local model expects a scalar query");
        weights = local_weights_impl(data_, x[0], *kernel_, -1);
    }
    return weighted_frechet_point(data_.responses(), data_.bound(), metric_, &power_images_, embedding_cap_,
                                  qp_, weights, data_.sample_size(), -1, diagnostics, warm_start);
}

GraphLaplacian frechet_mean(std::span<const GraphLaplacian> responses, const MetricSpec& metric) {
    if (responses.empty()) fail(ErrorCode::BadInput, "frechet_mean of an empty set");
    const int m = responses.front().size();
    double bound = 0.0;
    std::vector<Matrix> entries;
    entries.reserve(responses.size());
    for (const GraphLaplacian& response : responses) {
        if (response.size() != m) fail(ErrorCode::DimensionMismatch, "responses must share one node count");
        bound = std::max(bound, response.bound());
        entries.push_back(response.entries());
    }
    std::vector<Matrix> images;
    double cap = 0.0;
    if (metric.is_power()) {
        images = power_images_for(entries, metric.alpha);
        cap = EmbeddingSpace::with_gershgorin_cap(m, bound, metric.alpha).cap;
    }
    const std::vector<double> weights(responses.size(), 1.0);
    return weighted_frechet_point(entries, bound, metric, &images, cap, QPSettings{}, weights,
                                  static_cast<double>(responses.size()), -1, nullptr, nullptr);
}

BandwidthSelection select_bandwidth_loocv(const Dataset& data, const MetricSpec& metric, KernelFamily family,
                                          std::span<const double> grid, const QPSettings& qp) {
    if (grid.empty()) fail(ErrorCode::BadConfig, "bandwidth grid is empty");
    if (data.sample_size() < 3) fail(ErrorCode::BadConfig, "LOOCV needs at least three observations");
    if (data.predictor_dim() != 1)
        fail(ErrorCode::LocalNeedsScalarPredictor, "local regression requires a scalar predictor");

    BandwidthSelection selection;
    selection.grid.assign(grid.begin(), grid.end());
    std::sort(selection.grid.begin(), selection.grid.end());
    selection.grid.erase(std::unique(selection.grid.begin(), selection.grid.end()), selection.grid.end());
    for (double h : selection.grid)
        if (h <= 0.0) fail(ErrorCode::BadConfig, "bandwidths must be positive");

    const int n = data.sample_size();
    std::vector<Matrix> images;
    if (metric.is_power()) images = power_images_for(data.responses(), metric.alpha);
    const double cap = metric.is_power()
                           ? EmbeddingSpace::with_gershgorin_cap(data.node_count(), data.bound(), metric.alpha).cap
                           : 0.0;

    selection.criteria.assign(selection.grid.size(), std::numeric_limits<double>::quiet_NaN());
    double best_value = std::numeric_limits<double>::infinity();
    int best_index = -1;
    for (size_t g = 0; g < selection.grid.size(); ++g) {
        const KernelSpec kernel{family, selection.grid[g]};
        double total = 0.0;
        bool usable = true;
        GraphLaplacian warm = GraphLaplacian::unchecked(Matrix(data.node_count(), data.node_count()), data.bound());
        for (int k = 0; k < n && usable; ++k) {
            std::vector<double> weights;
            try {
                weights = local_weights_impl(data, data.predictor(k, 0), kernel, k);
            } catch (const Error& error) {
                if (error.code() == ErrorCode::BandwidthTooSmall) {
                    usable = false;
                    break;
                }
                throw;
            }
            GraphLaplacian held_out = weighted_frechet_point(data.responses(), data.bound(), metric, &images,
                                                             cap, qp, weights, n - 1, k, nullptr, &warm);
            const double miss = frobenius_norm(data.response(k) - held_out.entries());
            total += miss * miss;
            warm = std::move(held_out);
        }
        if (!usable) continue;
        selection.criteria[g] = total;
        if (total < best_value) {
            best_value = total;
            best_index = static_cast<int>(g);
        }
    }
    if (best_index < 0) fail(ErrorCode::AllBandwidthsFailed, "every candidate bandwidth was degenerate");
    selection.best = selection.grid[static_cast<size_t>(best_index)];
    return selection;
}

std::vector<double> default_bandwidth_grid(const Dataset& data, int points) {
    if (points < 1) fail(ErrorCode::BadConfig, "grid needs at least one point");
    if (data.predictor_dim() != 1)
        fail(ErrorCode::LocalNeedsScalarPredictor, "bandwidth grids apply to scalar predictors");
    const int n = data.sample_size();
    std::vector<double> xs(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) xs[static_cast<size_t>(k)] = data.predictor(k, 0);
    std::sort(xs.begin(), xs.end());
    std::vector<double> gaps;
    for (int k = 0; k + 1 < n; ++k) {
        const double gap = xs[static_cast<size_t>(k) + 1] - xs[static_cast<size_t>(k)];
        if (gap > 0.0) gaps.push_back(gap);
    }
    if (gaps.empty()) fail(ErrorCode::BadConfig, "predictors have no spread");
    std::sort(gaps.begin(), gaps.end());
    const double median_gap = gaps[(gaps.size() - 1) / 2];
    double lo = 0.5 * median_gap;
    double hi = 0.5 * (xs.back() - xs.front());
    if (hi <= lo) hi = 2.0 * lo;
    std::vector<double> grid(static_cast<size_t>(points));
    if (points == 1) {
        grid[0] = lo;
        return grid;
    }
    const double log_lo = std::log(lo);
    const double ratio = (std::log(hi) - log_lo) / (points - 1);
    for (int i = 0; i < points; ++i) grid[static_cast<size_t>(i)] = std::exp(log_lo + ratio * i);
    return grid;
}

namespace {

double r2_statistic(std::span<const Matrix> fitted, const Dataset& data, const MetricSpec& metric,
                    const std::vector<Matrix>* images) {
    const int n = data.sample_size();
    if (static_cast<int>(fitted.size()) != n) fail(ErrorCode::DimensionMismatch, "one fitted value per observation");
    bool all_equal = true;
    for (int k = 1; k < n && all_equal; ++k) all_equal = data.response(k) == data.response(0);
    if (all_equal) fail(ErrorCode::ZeroVariance, "responses are identical");

    std::vector<Matrix> local_images;
    if (metric.is_power() && images == nullptr) {
        local_images = power_images_for(data.responses(), metric.alpha);
        images = &local_images;
    }
    std::vector<Matrix> fitted_images;
    if (metric.is_power()) {
        fitted_images.reserve(fitted.size());
        for (const Matrix& value : fitted) fitted_images.push_back(matrix_power(value, metric.alpha));
    }

    const std::vector<double> unit(static_cast<size_t>(n), 1.0);
    const double cap = metric.is_power()
                           ? EmbeddingSpace::with_gershgorin_cap(data.node_count(), data.bound(), metric.alpha).cap
                           : 0.0;
    GraphLaplacian mean = weighted_frechet_point(data.responses(), data.bound(), metric, images, cap, QPSettings{},
                                                 unit, n, -1, nullptr, nullptr);
    Matrix mean_image;
    if (metric.is_power()) mean_image = matrix_power(mean.entries(), metric.alpha);

    double residual = 0.0;
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        const size_t idx = static_cast<size_t>(k);
        double miss, spread;
        if (metric.is_power()) {
            miss = frobenius_norm((*images)[idx] - fitted_images[idx]);
            spread = frobenius_norm((*images)[idx] - mean_image);
        } else {
            miss = frobenius_norm(data.response(k) - fitted[idx]);
            spread = frobenius_norm(data.response(k) - mean.entries());
        }
        residual += miss * miss;
        total += spread * spread;
    }
    if (total <= 0.0) fail(ErrorCode::ZeroVariance, "responses carry no variance under this metric");
    return 1.0 - residual / total;
}

}  // namespace

double frechet_r2(const FittedModel& model) {
    const Dataset& data = model.data();
    const int n = data.sample_size();
    std::vector<Matrix> fitted;
    fitted.reserve(static_cast<size_t>(n));
    std::vector<double> x(static_cast<size_t>(data.predictor_dim()));
    GraphLaplacian warm = GraphLaplacian::unchecked(Matrix(data.node_count(), data.node_count()), data.bound());
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < data.predictor_dim(); ++j) x[static_cast<size_t>(j)] = data.predictor(k, j);
        warm = model.predict(x, nullptr, &warm);
        fitted.push_back(warm.entries());
    }
    return r2_statistic(fitted, data, model.metric(), model.metric().is_power() ? &model.power_images() : nullptr);
}

double frechet_r2_from(std::span<const Matrix> fitted, const Dataset& data, const MetricSpec& metric) {
    return r2_statistic(fitted, data, metric, nullptr);
}

FittedModel fit_with_spec(const Dataset& data, const FitSpec& spec) {
    if (spec.mode == RegressionMode::Global)
        return fit(data, spec.mode, spec.metric, std::nullopt, spec.cap_override, spec.qp);
    double bandwidth;
    if (spec.bandwidth.has_value()) {
        bandwidth = *spec.bandwidth;
    } else {
        const std::vector<double> grid =
            spec.cv_grid.has_value() ? *spec.cv_grid : default_bandwidth_grid(data);
        bandwidth = select_bandwidth_loocv(data, spec.metric, spec.kernel_family, grid, spec.qp).best;
    }
    return fit(data, spec.mode, spec.metric, KernelSpec{spec.kernel_family, bandwidth}, spec.cap_override, spec.qp);
}

double mspe_cv(const Dataset& data, const FitSpec& spec, int folds, int repeats, uint64_t seed) {
    const int n = data.sample_size();
    if (folds < 2) fail(ErrorCode::BadConfig, "need at least two folds");
    if (folds > n) fail(ErrorCode::BadConfig, "more folds than observations");
    if (repeats < 1) fail(ErrorCode::BadConfig, "need at least one repeat");

    double sum_over_repeats = 0.0;
    std::vector<double> x(1);
    for (int repeat = 0; repeat < repeats; ++repeat) {
        Rng rng = Rng::substream(seed, {0x6d5fe, static_cast<uint64_t>(repeat)});
        std::vector<int> order(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) order[static_cast<size_t>(k)] = k;
        for (int k = n - 1; k > 0; --k)
            std::swap(order[static_cast<size_t>(k)], order[rng.below(static_cast<uint64_t>(k) + 1)]);

        double repeat_total = 0.0;
        int cursor = 0;
        for (int fold = 0; fold < folds; ++fold) {
            const int fold_size = n / folds + (fold < n % folds ? 1 : 0);
            std::vector<int> held(order.begin() + cursor, order.begin() + cursor + fold_size);
            cursor += fold_size;
            std::vector<int> train;
            train.reserve(static_cast<size_t>(n - fold_size));
            for (int k = 0; k < n; ++k)
                if (std::find(held.begin(), held.end(), k) == held.end()) train.push_back(k);

            FittedModel model = fit_with_spec(data.subset(train), spec);
            std::vector<double> query(static_cast<size_t>(data.predictor_dim()));
            for (int k : held) {
                for (int j = 0; j < data.predictor_dim(); ++j) query[static_cast<size_t>(j)] = data.predictor(k, j);
                const GraphLaplacian prediction = model.predict(query);
                const double miss = frobenius_norm(data.response(k) - prediction.entries());
                repeat_total += miss * miss;
            }
        }
        sum_over_repeats += repeat_total / n;
    }
    return sum_over_repeats / repeats;
}

}  // namespace lapreg
