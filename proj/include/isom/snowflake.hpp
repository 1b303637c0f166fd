#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "isom/cayley_menger.hpp"
#include "isom/embed_ell2.hpp"
#include "isom/error.hpp"
#include "isom/metric.hpp"
#include "isom/norm.hpp"

namespace isom {

/// Canonical realization of a snowflake, rotated onto the simplex {e_i / sqrt(2)}.
struct AlignedRealization {
    double alpha = 1.0;
    bool realizable = false;
    Matrix points;                  // n x n, row i is the aligned image of point i
    double max_deviation = 0.0;     // max_i ||aligned_i - e_i / sqrt(2)||_2
    double min_singular_value = 0.0;
};

struct SnowflakeThreshold {
    double alpha = 0.0;
    double proximity_bound = 0.0;
    std::vector<AlignedRealization> checks;  // one per grid value, in descending alpha order
};

/// Smallest singular value the aligned point matrix must exceed for the points
/// to count as linearly independent: 1/2 - n * proximity_bound.
inline double linear_independence_bound(std::size_t n, double proximity_bound) {
    return 0.5 - static_cast<double>(n) * proximity_bound;
}

/// M rescaled so its smallest pairwise distance is 1.
inline MetricSpace normalize_min_distance(const MetricSpace& m) {
    if (m.size() < 2) return m;
    return m.scaled(1.0 / m.min_distance());
}

/// Realizes snowflake(normalize_min_distance(m), alpha) and aligns it to
/// {e_i / sqrt(2)} by translating centroids together and solving the
/// orthogonal Procrustes problem. A failed sign test leaves realizable false.
inline AlignedRealization aligned_snowflake_realization(const MetricSpace& m, double alpha) {
    AlignedRealization out;
    out.alpha = alpha;
    const auto flake = snowflake(normalize_min_distance(m), alpha);
    if (!sign_sequence_check(flake).signs_ok) return out;

    PointConfig real;
    try {
        real = realize_euclidean(flake);
    } catch (const Error&) {
        return out;
    }
    const auto n = static_cast<Eigen::Index>(m.size());
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& v = real[static_cast<std::size_t>(i)];
        p.row(i).head(v.size()) = v.transpose();
    }
    const Matrix target = Matrix::Identity(n, n) / std::sqrt(2.0);

    const Eigen::RowVectorXd pc = p.colwise().mean();
    const Eigen::RowVectorXd tc = target.colwise().mean();
    const Matrix p0 = p.rowwise() - pc;
    const Matrix t0 = target.rowwise() - tc;
    Eigen::JacobiSVD<Matrix> svd(p0.transpose() * t0, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix rot = svd.matrixU() * svd.matrixV().transpose();

    out.points = (p0 * rot).rowwise() + tc;
    out.realizable = true;
    out.max_deviation = (out.points - target).rowwise().norm().maxCoeff();
    const Vector sv = out.points.jacobiSvd().singularValues();
    out.min_singular_value = sv.size() ? sv.minCoeff() : 0.0;
    return out;
}

/// Largest grid alpha such that every grid value at or below it gives a
/// realizable snowflake whose aligned points lie within proximity_bound of
/// e_i / sqrt(2). The grid is sorted descending and deduplicated first; the
/// default bound is 1/(100 n). Throws NoValidAlpha when even the smallest fails.
inline SnowflakeThreshold snowflake_threshold(const MetricSpace& m, std::vector<double> grid,
                                              std::optional<double> proximity_bound = std::nullopt) {
    if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "alpha grid is empty");
    for (double a : grid) {
        if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorKind::AlphaOutOfRange, "grid values must lie in (0, 1]");
    }
    std::sort(grid.begin(), grid.end(), std::greater<>());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    SnowflakeThreshold out;
    out.proximity_bound = proximity_bound ? *proximity_bound : 1.0 / (100.0 * static_cast<double>(m.size()));
    if (!(out.proximity_bound > 0.0)) throw Error(ErrorKind::InvalidArgument, "proximity bound must be positive");

    for (double a : grid) out.checks.push_back(aligned_snowflake_realization(m, a));

    std::optional<double> best;
    for (auto it = out.checks.rbegin(); it != out.checks.rend(); ++it) {
        if (!it->realizable || !(it->max_deviation < out.proximity_bound)) break;
        best = it->alpha;
    }
    if (!best) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "no grid alpha passes; smallest alpha " << out.checks.back().alpha;
        if (out.checks.back().realizable) {
            msg << " deviates by " << out.checks.back().max_deviation << " (bound " << out.proximity_bound << ")";
        } else {
            msg << " is not Euclidean-realizable";
        }
        throw Error(ErrorKind::NoValidAlpha, msg.str());
    }
    out.alpha = *best;
    return out;
}

/// snowflake(m, alpha) embedded isometrically into Z by embed_affinely_independent.
inline EmbeddingResult embed_snowflake(const MetricSpace& m, double alpha, const NormSpec& z,
                                       const EmbedOptions& opts = {}) {
    auto res = embed_affinely_independent(snowflake(m, alpha), z, opts);
    res.mode = "snowflake";
    return res;
}

}  // namespace isom
