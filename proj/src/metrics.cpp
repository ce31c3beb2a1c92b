#include "lapreg/metrics.hpp"

#include "lapreg/errors.hpp"
#include "lapreg/spectral.hpp"

namespace lapreg {

MetricSpec MetricSpec::power(double alpha) {
    if (alpha <= 0.0) fail(ErrorCode::BadConfig, "power metric needs alpha > 0");
    return {MetricKind::Power, alpha};
}

double distance(const Matrix& lhs, const Matrix& rhs, const MetricSpec& metric) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
        fail(ErrorCode::DimensionMismatch, "distance between different sizes");
    if (metric.kind == MetricKind::Frobenius) return frobenius_norm(lhs - rhs);
    return frobenius_norm(matrix_power(lhs, metric.alpha) - matrix_power(rhs, metric.alpha));
}

double distance(const GraphLaplacian& lhs, const GraphLaplacian& rhs, const MetricSpec& metric) {
    return distance(lhs.entries(), rhs.entries(), metric);
}

}  // namespace lapreg
