#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isom/error.hpp"
#include "isom/norm.hpp"
#include "isom/types.hpp"

namespace isom {

/// Absolute tolerance for the metric axioms, relative to the largest entry.
inline constexpr double kMetricTolerance = 1e-12;

/// A finite metric space stored as its distance matrix. Instances are only
/// produced by validate_metric (or transforms of valid spaces), so every
/// MetricSpace satisfies the metric axioms up to kMetricTolerance.
class MetricSpace {
public:
    std::size_t size() const noexcept { return static_cast<std::size_t>(d_.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return d_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const Matrix& matrix() const noexcept { return d_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    double diameter() const { return size() < 2 ? 0.0 : d_.maxCoeff(); }

    double min_distance() const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j) m = std::min(m, (*this)(i, j));
        return m;
    }

    /// Same space with every distance multiplied by s > 0.
    MetricSpace scaled(double s) const {
        if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "scale must be positive");
        MetricSpace out = *this;
        out.d_ *= s;
        return out;
    }

    /// Sub-space on the given indices, in that order.
    MetricSpace subspace(const std::vector<std::size_t>& idx) const {
        MetricSpace out;
        const auto m = static_cast<Eigen::Index>(idx.size());
        out.d_ = Matrix::Zero(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b)
                out.d_(a, b) = (*this)(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
        if (!labels_.empty()) {
            for (auto i : idx) out.labels_.push_back(labels_[i]);
        }
        return out;
    }

private:
    friend MetricSpace validate_metric(const Matrix& matrix, std::vector<std::string> labels);
    friend MetricSpace snowflake(const MetricSpace& m, double alpha);

    Matrix d_;
    std::vector<std::string> labels_;
};

/// Checks the metric axioms and returns the validated space. Symmetry and the
/// triangle inequality are tested with an absolute slack of 1e-12 times the
/// largest entry; the stored matrix is symmetrized.
inline MetricSpace validate_metric(const Matrix& matrix, std::vector<std::string> labels = {}) {
    if (matrix.rows() != matrix.cols()) throw Error(ErrorKind::NotSquare, "distance matrix must be square");
    const auto n = static_cast<std::size_t>(matrix.rows());
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "a metric space needs at least one point");
    if (!labels.empty() && labels.size() != n) {
        throw Error(ErrorKind::InvalidArgument, "label count does not match the number of points");
    }
    if (!matrix.allFinite()) throw Error(ErrorKind::NonFinite, "distance matrix has non-finite entries");

    const double tol = kMetricTolerance * std::max(1.0, matrix.cwiseAbs().maxCoeff());
    auto at = [&](std::size_t i, std::size_t j) {
        return matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (at(i, i) != 0.0) throw Error(ErrorKind::NonzeroDiagonal, "d(i,i) must be 0", {i});
        for (std::size_t j = 0; j < n; ++j) {
            if (at(i, j) < 0.0) throw Error(ErrorKind::NegativeDistance, "negative distance", {i, j});
            if (std::abs(at(i, j) - at(j, i)) > tol) throw Error(ErrorKind::Asymmetric, "d(i,j) != d(j,i)", {i, j});
            if (i != j && at(i, j) == 0.0) {
                throw Error(ErrorKind::ZeroOffDiagonal, "distinct points at distance 0", {i, j});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (at(i, k) > at(i, j) + at(j, k) + tol) {
                    throw Error(ErrorKind::TriangleViolation,
                                "d(" + std::to_string(i) + "," + std::to_string(k) + ") > d(" + std::to_string(i) +
                                    "," + std::to_string(j) + ") + d(" + std::to_string(j) + "," +
                                    std::to_string(k) + ")",
                                {i, j, k});
                }
            }

    MetricSpace m;
    m.d_ = 0.5 * (matrix + matrix.transpose());
    m.labels_ = std::move(labels);
    return m;
}

/// Half the smallest triangle slack, min over distinct (x, y, z) of
/// (d(x,y) + d(y,z) - d(x,z)) / 2. The space is concave iff this is positive.
/// Spaces with fewer than three points have no triples and return +infinity.
inline double concavity_margin(const MetricSpace& m) {
    const auto n = m.size();
    if (n < 3) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                if (x == y || y == z || x == z) continue;
                best = std::min(best, 0.5 * (m(x, y) + m(y, z) - m(x, z)));
            }
    return std::max(best, 0.0);
}

/// The alpha-snowflake (X, d^alpha). alpha = 1 is the identity; alpha > 1 is
/// rejected since d^alpha need not satisfy the triangle inequality.
inline MetricSpace snowflake(const MetricSpace& m, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::AlphaOutOfRange, "snowflake exponent must lie in (0, 1]");
    MetricSpace out = m;
    if (alpha != 1.0) out.d_ = m.d_.array().pow(alpha).matrix();
    return out;
}

/// K when every off-diagonal distance equals K exactly. A one-point space has
/// no pairs and is reported as not equilateral.
inline std::optional<double> is_equilateral(const MetricSpace& m) {
    if (m.size() < 2) return std::nullopt;
    const double k = m(0, 1);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (m(i, j) != k) return std::nullopt;
    return k;
}

/// Indices k with d(i,k) = d(k,j) = d(i,j)/2, each equality within
/// rel_tol * d(i,j).
inline std::vector<std::size_t> metric_midpoints(const MetricSpace& m, std::size_t i, std::size_t j,
                                                 double rel_tol = 1e-12) {
    if (i >= m.size() || j >= m.size()) throw Error(ErrorKind::InvalidArgument, "index out of range");
    if (i == j) throw Error(ErrorKind::InvalidArgument, "midpoints need two distinct points");
    const double half = 0.5 * m(i, j);
    const double tol = rel_tol * m(i, j);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (k == i || k == j) continue;
        if (std::abs(m(i, k) - half) <= tol && std::abs(m(k, j) - half) <= tol) out.push_back(k);
    }
    return out;
}

/// The metric induced on the points by ||p_i - p_j||_Z.
inline MetricSpace distance_matrix_of(const PointConfig& points, const NormSpec& z) {
    if (points.dim() != z.dim()) throw Error(ErrorKind::DimensionMismatch, "points and norm live in different spaces");
    const auto n = static_cast<Eigen::Index>(points.size());
    Matrix d = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = evaluate(z, points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(j)]);
            if (v == 0.0) {
                throw Error(ErrorKind::DuplicatePoints, "points coincide",
                            {static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
            }
            d(i, j) = d(j, i) = v;
        }
    return validate_metric(d);
}

/// r and K with r d(i,j) <= ||p_i - p_j||_Z <= r K d(i,j), the points being
/// matched to the metric by index.
struct Distortion {
    double r = 0.0;
    double k = 0.0;
};

inline Distortion correspondence_distortion(const MetricSpace& m, const PointConfig& points, const NormSpec& z) {
    if (points.size() != m.size()) throw Error(ErrorKind::InvalidArgument, "point count differs from metric size");
    if (m.size() < 2) throw Error(ErrorKind::InvalidArgument, "distortion needs at least two points");
    if (points.dim() != z.dim()) throw Error(ErrorKind::DimensionMismatch, "points and norm live in different spaces");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            const double rho = evaluate(z, points[i] - points[j]) / m(i, j);
            if (rho == 0.0) throw Error(ErrorKind::DegenerateImage, "two points share an image", {i, j});
            lo = std::min(lo, rho);
            hi = std::max(hi, rho);
        }
    return {lo, hi / lo};
}

}  // namespace isom
