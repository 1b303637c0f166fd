#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "isom/error.hpp"
#include "isom/metric.hpp"
#include "isom/types.hpp"

namespace isom {

/// Relative threshold below which a Cayley-Menger determinant counts as zero.
inline constexpr double kCmTolerance = 1e-10;
/// Relative threshold on squared pivots of the incremental realization.
inline constexpr double kPivotTolerance = 1e-10;

/// Sign sequence of the Cayley-Menger determinants of the prefixes
/// (p_0, p_1), (p_0, p_1, p_2), ... of an ordering.
struct CmReport {
    std::vector<double> dets;  // dets[k-1] = CMDet(p_0..p_k)
    bool signs_ok = true;
    std::optional<std::size_t> first_failure;  // smallest k whose sign is wrong
    std::vector<std::size_t> ordering;
};

/// Determinant of the bordered matrix [[rho, 1], [1^T, 0]] with
/// rho_ab = d(subset[a], subset[b])^2.
inline double cm_det(const MetricSpace& m, std::span<const std::size_t> subset) {
    if (subset.size() < 2) throw Error(ErrorKind::InvalidArgument, "Cayley-Menger determinant needs >= 2 points");
    for (std::size_t a = 0; a < subset.size(); ++a) {
        if (subset[a] >= m.size()) throw Error(ErrorKind::InvalidArgument, "index out of range");
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            if (subset[a] == subset[b]) throw Error(ErrorKind::DuplicateIndices, "repeated index", {subset[a]});
    }
    const auto k = static_cast<Eigen::Index>(subset.size());
    Matrix cm = Matrix::Ones(k + 1, k + 1);
    cm(k, k) = 0.0;
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) {
            const double d = m(subset[static_cast<std::size_t>(a)], subset[static_cast<std::size_t>(b)]);
            cm(a, b) = d * d;
        }
    return cm.partialPivLu().determinant();
}

inline double cm_det(const MetricSpace& m, std::initializer_list<std::size_t> subset) {
    return cm_det(m, std::span<const std::size_t>(subset.begin(), subset.size()));
}

/// Tests sign(CMDet(p_0..p_k)) = (-1)^{k+1} for k = 1..n-1, which holds iff the
/// space embeds isometrically in l_2^{n-1} as an affinely independent set.
/// Determinants with |det| < 1e-10 * diam^{2k} (diameter of the prefix) count
/// as zero and fail. An empty ordering means the identity.
inline CmReport sign_sequence_check(const MetricSpace& m, std::vector<std::size_t> ordering = {}) {
    const auto n = m.size();
    if (ordering.empty()) {
        ordering.resize(n);
        std::iota(ordering.begin(), ordering.end(), std::size_t{0});
    }
    auto sorted = ordering;
    std::sort(sorted.begin(), sorted.end());
    bool is_permutation = sorted.size() == n;
    for (std::size_t i = 0; is_permutation && i < n; ++i) is_permutation = sorted[i] == i;
    if (!is_permutation) throw Error(ErrorKind::InvalidArgument, "ordering is not a permutation");

    CmReport report;
    report.ordering = ordering;
    double diam = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t a = 0; a < k; ++a) diam = std::max(diam, m(ordering[a], ordering[k]));
        const double det = cm_det(m, std::span<const std::size_t>(ordering.data(), k + 1));
        report.dets.push_back(det);
        const double zero = kCmTolerance * std::pow(diam, 2.0 * static_cast<double>(k));
        const double expected_sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^{k+1}
        const bool ok = std::abs(det) >= zero && det * expected_sign > 0.0;
        if (!ok && report.signs_ok) {
            report.signs_ok = false;
            report.first_failure = k;
        }
    }
    return report;
}

/// Trilateration step behind the incremental realization. Given base points
/// b_0 = 0, b_1, ..., b_{m-1} in canonical form (b_i in span{e_1..e_i} with a
/// positive i-th coordinate) and target distances t_i, returns the unique
/// x in R^m with ||x - b_i||_2 = t_i and positive last coordinate.
///
/// Only the leading m-1 coordinates of the base points are used; any further
/// coordinates must vanish.
inline Vector append_point(const PointConfig& base, std::span<const double> target) {
    const auto m = base.size();
    if (m == 0) throw Error(ErrorKind::InvalidArgument, "append_point needs a non-empty base");
    if (target.size() != m) throw Error(ErrorKind::InvalidArgument, "one target distance per base point is required");
    if (base.dim() + 1 < m) throw Error(ErrorKind::Degenerate, "base points cannot be affinely independent in this dimension");

    double scale = 0.0;
    for (double t : target) {
        if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "target distances must be positive");
        scale = std::max(scale, t);
    }
    for (const auto& b : base.points()) scale = std::max(scale, b.norm());
    const double zero = 1e-12 * scale;
    const double min_pivot = std::sqrt(kPivotTolerance) * scale;

    const auto mi = static_cast<Eigen::Index>(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& b = base[i];
        const auto ii = static_cast<Eigen::Index>(i);
        for (Eigen::Index c = ii; c < b.size(); ++c) {
            if (std::abs(b[c]) > zero) throw Error(ErrorKind::Degenerate, "base is not in canonical triangular form", {i});
        }
        if (i > 0 && !(b[ii - 1] > min_pivot)) {
            throw Error(ErrorKind::Degenerate, "base points are not affinely independent", {i});
        }
    }

    // x.b_i = (t_0^2 + |b_i|^2 - t_i^2) / 2, a lower-triangular system in the first m-1 coordinates.
    Vector x = Vector::Zero(mi);
    const double t0sq = target[0] * target[0];
    for (Eigen::Index i = 1; i < mi; ++i) {
        const auto& b = base[static_cast<std::size_t>(i)];
        const double bsq = b.head(i).squaredNorm();
        const double ti = target[static_cast<std::size_t>(i)];
        double rhs = 0.5 * (t0sq + bsq - ti * ti);
        for (Eigen::Index c = 0; c < i - 1; ++c) rhs -= b[c] * x[c];
        x[i - 1] = rhs / b[i - 1];
    }
    const double hsq = t0sq - x.head(mi - 1).squaredNorm();
    if (!(hsq > kPivotTolerance * scale * scale)) {
        throw Error(ErrorKind::Infeasible,
                    hsq < 0.0 ? "spheres do not intersect (last coordinate squared is negative)"
                              : "new point is affinely dependent on the base (last coordinate vanishes)");
    }
    x[mi - 1] = std::sqrt(hsq);
    return x;
}

inline Vector append_point(const PointConfig& base, const std::vector<double>& target) {
    return append_point(base, std::span<const double>(target));
}

/// The canonical realization q_0 = 0, q_i in span{e_1..e_i} with positive i-th
/// coordinate, built point by point with append_point. Output lives in R^{n-1}.
inline PointConfig realize_euclidean(const MetricSpace& m) {
    const auto n = m.size();
    const auto report = sign_sequence_check(m);
    if (!report.signs_ok) {
        throw Error(ErrorKind::NotRealizable,
                    "Cayley-Menger sign test fails at k = " + std::to_string(*report.first_failure),
                    {*report.first_failure});
    }
    const auto dim = static_cast<Eigen::Index>(n - 1);
    PointConfig out(n - 1);
    out.push_back(Vector::Zero(dim));
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> target(k);
        for (std::size_t i = 0; i < k; ++i) target[i] = m(i, k);
        Vector q;
        try {
            q = append_point(out, target);
        } catch (const Error& e) {
            throw Error(ErrorKind::IllConditioned, std::string("pivot below tolerance while placing point ") +
                                                       std::to_string(k) + " (" + e.what() + ")",
                        {k});
        }
        Vector full = Vector::Zero(dim);
        full.head(q.size()) = q;
        out.push_back(std::move(full));
    }
    return out;
}

}  // namespace isom
