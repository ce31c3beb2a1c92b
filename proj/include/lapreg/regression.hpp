#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lapreg/graph.hpp"
#include "lapreg/matrix.hpp"
#include "lapreg/metrics.hpp"
#include "lapreg/projections.hpp"

namespace lapreg {

enum class RegressionMode { Global, Local };

enum class KernelFamily { Gaussian, Epanechnikov };

/// Smoothing kernel: a symmetric probability density and a bandwidth.
struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    double bandwidth = 0.0;
};

double kernel_value(KernelFamily family, double u);

/// Which constraints the responses of a dataset satisfy. Squares of graph
/// Laplacians keep symmetry, zero row sums and positive semi-definiteness
/// but can carry positive off-diagonals, so they get a two-sided
/// off-diagonal box instead of the one-sided Laplacian box.
enum class ResponseSpace { Laplacian, SquaredLaplacian };

/// n observed pairs: predictor vectors in R^p and network responses that
/// share the node count m and edge bound W.
class Dataset {
  public:
    static Dataset create(Matrix predictors, std::vector<GraphLaplacian> responses);

    /// Validates raw response matrices. When `bound` is not given it
    /// defaults to the largest off-diagonal magnitude across responses.
    static Dataset from_raw(Matrix predictors, std::vector<Matrix> responses,
                            std::optional<double> bound = std::nullopt,
                            ResponseSpace space = ResponseSpace::Laplacian);

    /// Row subset in the given index order; no revalidation.
    Dataset subset(std::span<const int> indices) const;

    int sample_size() const { return predictors_.rows(); }
    int predictor_dim() const { return predictors_.cols(); }
    int node_count() const { return node_count_; }
    double bound() const { return bound_; }
    ResponseSpace space() const { return space_; }

    const Matrix& predictors() const { return predictors_; }
    double predictor(int k, int j) const { return predictors_(k, j); }
    const Matrix& response(int k) const { return responses_[static_cast<size_t>(k)]; }
    const std::vector<Matrix>& responses() const { return responses_; }

  private:
    friend class FittedModel;
    Dataset() = default;

    Matrix predictors_;
    std::vector<Matrix> responses_;
    int node_count_ = 0;
    double bound_ = 0.0;
    ResponseSpace space_ = ResponseSpace::Laplacian;
};

/// Global regression weights s_kG(x) = 1 + (X_k - mean)' Sigma^{-1} (x - mean),
/// with Sigma the 1/n-normalized sample covariance. Their mean is 1 by
/// construction.
std::vector<double> global_weights(const Dataset& data, std::span<const double> x);

/// Local linear weights s_kL(x, h) = K_h(X_k - x) [mu2 - mu1 (X_k - x)] / sigma0^2.
/// Scalar predictors only.
std::vector<double> local_weights(const Dataset& data, double x, const KernelSpec& kernel);

/// Internals surfaced for inspection alongside a prediction.
struct PredictionDiagnostics {
    std::vector<double> weights;
    Matrix target;                     // matrix handed to the final Laplacian projection
    double projection_residual = 0.0;  // d_F(target, prediction)
    bool qp_converged = true;
    int qp_iterations = 0;
};

/// A fitted global or local network regression. Both estimators need the
/// training data at prediction time, so the dataset is retained. Immutable
/// and safe to share across threads.
class FittedModel {
  public:
    GraphLaplacian predict(std::span<const double> x) const;
    GraphLaplacian predict(std::span<const double> x, PredictionDiagnostics* diagnostics,
                           const GraphLaplacian* warm_start = nullptr) const;

    RegressionMode mode() const { return mode_; }
    const MetricSpec& metric() const { return metric_; }
    const std::optional<KernelSpec>& kernel() const { return kernel_; }
    const Dataset& data() const { return data_; }
    double embedding_cap() const { return embedding_cap_; }
    const QPSettings& qp_settings() const { return qp_; }
    const std::vector<Matrix>& power_images() const { return power_images_; }

    friend FittedModel fit(Dataset data, RegressionMode mode, const MetricSpec& metric,
                           std::optional<KernelSpec> kernel, std::optional<double> cap_override,
                           const QPSettings& qp);

  private:
    FittedModel() = default;

    Dataset data_;
    RegressionMode mode_ = RegressionMode::Global;
    MetricSpec metric_ = MetricSpec::frobenius();
    std::optional<KernelSpec> kernel_;
    std::vector<double> mean_predictor_;
    Matrix covariance_inverse_;
    std::vector<Matrix> power_images_;
    double embedding_cap_ = 0.0;
    QPSettings qp_;
};

FittedModel fit(Dataset data, RegressionMode mode, const MetricSpec& metric,
                std::optional<KernelSpec> kernel = std::nullopt,
                std::optional<double> cap_override = std::nullopt, const QPSettings& qp = {});

/// Fréchet mean of the responses: the projected Euclidean mean under the
/// Frobenius metric, the embed/average/map-back pipeline under a power
/// metric.
GraphLaplacian frechet_mean(std::span<const GraphLaplacian> responses, const MetricSpec& metric);

struct BandwidthSelection {
    double best = 0.0;
    std::vector<double> grid;      // ascending
    std::vector<double> criteria;  // LOOCV criterion per grid entry; NaN where skipped
};

/// Leave-one-out bandwidth selection. The criterion for h sums the squared
/// Frobenius distances between each held-out response and the prediction
/// of the model fitted without it; d_F is used regardless of the fitting
/// metric so criteria are comparable across metrics. Bandwidths that hit
/// BandwidthTooSmall at any held-out point are skipped; ties resolve to
/// the smallest h.
BandwidthSelection select_bandwidth_loocv(const Dataset& data, const MetricSpec& metric,
                                          KernelFamily family, std::span<const double> grid,
                                          const QPSettings& qp = {});

/// 20 log-spaced bandwidths from half the median gap of the sorted
/// predictors up to half the predictor range.
std::vector<double> default_bandwidth_grid(const Dataset& data, int points = 20);

/// Fraction of Frechet variance explained: 1 - sum d^2(L_k, m(X_k)) /
/// sum d^2(L_k, mean), distances in the model's metric. At most 1, can
/// be negative for fits worse than the mean.
double frechet_r2(const FittedModel& model);

/// Same statistic from externally supplied fitted values.
double frechet_r2_from(std::span<const Matrix> fitted, const Dataset& data, const MetricSpec& metric);

/// One user-facing fitting recipe: mode, metric, kernel family and either
/// a fixed bandwidth or LOOCV (the default when bandwidth is empty).
struct FitSpec {
    RegressionMode mode = RegressionMode::Global;
    MetricSpec metric = MetricSpec::frobenius();
    KernelFamily kernel_family = KernelFamily::Gaussian;
    std::optional<double> bandwidth;              // empty => LOOCV for local mode
    std::optional<std::vector<double>> cv_grid;   // empty => default grid
    std::optional<double> cap_override;
    QPSettings qp;
};

FittedModel fit_with_spec(const Dataset& data, const FitSpec& spec);

/// K-fold cross-validated mean squared prediction error, averaged over
/// `repeats` seeded shuffles. Comparison distance is d_F for every
/// fitting metric.
double mspe_cv(const Dataset& data, const FitSpec& spec, int folds, int repeats, uint64_t seed);

}  // namespace lapreg
