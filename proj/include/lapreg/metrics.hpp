#pragma once

#include "lapreg/graph.hpp"
#include "lapreg/matrix.hpp"

namespace lapreg {

enum class MetricKind { Frobenius, Power };

/// Distance choice between graph Laplacians: plain Frobenius, or the
/// Frobenius distance between alpha-th spectral powers.
struct MetricSpec {
    MetricKind kind = MetricKind::Frobenius;
    double alpha = 1.0;  // used when kind == Power

    static MetricSpec frobenius() { return {MetricKind::Frobenius, 1.0}; }
    static MetricSpec power(double alpha);

    bool is_power() const { return kind == MetricKind::Power; }
};

double distance(const GraphLaplacian& lhs, const GraphLaplacian& rhs, const MetricSpec& metric);

/// Distance on raw symmetric PSD matrices; the GraphLaplacian overload
/// forwards here.
double distance(const Matrix& lhs, const Matrix& rhs, const MetricSpec& metric);

}  // namespace lapreg
