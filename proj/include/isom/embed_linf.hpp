#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "isom/embedding.hpp"
#include "isom/fixed_point.hpp"
#include "isom/metric.hpp"
#include "isom/norm.hpp"

namespace isom {

/// x_i -> (d(x_i, x_1), ..., d(x_i, x_n)); isometric into l_inf^n.
inline PointConfig frechet_embedding(const MetricSpace& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    PointConfig out(m.size());
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(m.matrix().row(i).transpose());
    return out;
}

/// Fréchet embedding with coordinate j of p_i raised by eps(i, j) for j < i
/// (only the strictly lower triangle of eps is read). For eps in [0, eta]
/// with eta below the concavity margin, ||p_i - p_j||_inf = d(i,j) + eps(i,j)
/// for i > j exactly.
inline PointConfig perturbed_frechet(const MetricSpace& m, const Matrix& eps) {
    const auto n = static_cast<Eigen::Index>(m.size());
    if (eps.rows() != n || eps.cols() != n) throw Error(ErrorKind::InvalidArgument, "eps must be an n x n matrix");
    const double margin = concavity_margin(m);
    double largest = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j) {
            if (!(eps(i, j) >= 0.0)) throw Error(ErrorKind::EpsExceedsMargin, "perturbations must be nonnegative");
            largest = std::max(largest, eps(i, j));
        }
    if (largest > 0.0 && !(largest < margin)) {
        throw Error(ErrorKind::EpsExceedsMargin, "largest perturbation " + std::to_string(largest) +
                                                     " is not below the concavity margin " + std::to_string(margin));
    }
    PointConfig out(m.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        Vector p = m.matrix().row(i).transpose();
        for (Eigen::Index j = 0; j < i; ++j) p[j] += eps(i, j);
        out.push_back(std::move(p));
    }
    return out;
}

/// Isometric embedding of a concave metric space into (R^n, Z) for Z close to
/// l_inf^n: solves phi(eps) = eps for the strictly lower-triangular eps, where
/// phi_ij(eps) = d(i,j) + eps_ij - ||p_i(eps) - p_j(eps)||_Z, and returns the
/// perturbed Fréchet points at the fixed point.
///
/// eta defaults to 0.9 of the concavity margin. Z is rescaled when sampling
/// shows ||x||_Z > ||x||_inf, and the box condition
/// (delta/(delta+1)) (diam + eta) < eta is checked before solving.
inline EmbeddingResult embed_concave(const MetricSpace& m, const NormSpec& z, const EmbedOptions& opts = {}) {
    const auto n = m.size();
    if (z.dim() != n) {
        throw Error(ErrorKind::DimensionMismatch, "an " + std::to_string(n) + "-point space needs a norm on R^" +
                                                      std::to_string(n));
    }
    const double margin = concavity_margin(m);
    if (!(margin > 0.0)) throw Error(ErrorKind::NotConcave, "some triangle inequality holds with equality");
    const double eta = opts.eps_box ? *opts.eps_box : 0.9 * std::min(margin, m.diameter());
    if (opts.eps_box && !(eta < margin)) throw Error(ErrorKind::EpsExceedsMargin, "eps_box must be below the margin");

    detail::Normalization norm{z, 1.0, 0.0};
    if (n >= 2) norm = detail::normalize_against(z, NormSpec::linf(n), n, opts);
    const NormSpec& zn = norm.norm;
    const double shrink = norm.delta / (norm.delta + 1.0);
    if (n >= 2 && !(shrink * (m.diameter() + eta) < eta)) {
        throw Error(ErrorKind::NormTooFar, "box condition fails: delta/(delta+1) * (diam + eta) = " +
                                               std::to_string(shrink * (m.diameter() + eta)) + " >= eta = " +
                                               std::to_string(eta));
    }

    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
        for (Eigen::Index j = 0; j < i; ++j) pairs.emplace_back(i, j);
    const auto np = static_cast<Eigen::Index>(pairs.size());

    auto unpack = [&](const Vector& v) {
        Matrix eps = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index k = 0; k < np; ++k) eps(pairs[k].first, pairs[k].second) = v[k];
        return eps;
    };

    const double slack = opts.box_slack * m.diameter();
    FixedPointReport diag;
    auto phi = [&](const Vector& v) {
        const auto pts = perturbed_frechet(m, unpack(v));
        Vector y(np);
        for (Eigen::Index k = 0; k < np; ++k) {
            const auto [i, j] = pairs[static_cast<std::size_t>(k)];
            const double target = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) + v[k];
            const double yk =
                target - evaluate(zn, pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]);
            const double upper = shrink * target;
            diag.min_phi = std::min(diag.min_phi, yk);
            if (upper > 0.0) diag.max_upper_ratio = std::max(diag.max_upper_ratio, yk / upper);
            if (yk < -slack || yk > upper + slack || yk > eta + slack) {
                throw Error(ErrorKind::NormTooFar, "phi_(" + std::to_string(i) + "," + std::to_string(j) +
                                                       ") = " + std::to_string(yk) + " leaves its box");
            }
            y[k] = std::clamp(yk, 0.0, eta);
        }
        return y;
    };

    std::vector<FixedPointReport> reports;
    Vector eps_star = Vector::Zero(np);
    if (np > 0) {
        auto sol = solve_fixed_point(phi, Vector::Zero(np), m.diameter(), opts.solver, 0.0, eta);
        sol.report.eps_box = eta;
        sol.report.min_phi = diag.min_phi;
        sol.report.max_upper_ratio = diag.max_upper_ratio;
        if (!sol.report.converged) {
            throw Error(ErrorKind::SolverStalled, "fixed-point iteration did not converge (residual " +
                                                      std::to_string(sol.report.final_residual) + ")");
        }
        eps_star = sol.x;
        reports.push_back(std::move(sol.report));
    }

    PointConfig image = perturbed_frechet(m, unpack(eps_star));
    const auto cert = certify(m, image, zn);
    return EmbeddingResult{std::move(image), cert.max_abs_err, cert.max_rel_err, opts.tol,
                           cert.max_rel_err <= opts.tol, std::move(reports), zn, norm.scale, norm.delta, "linf"};
}

}  // namespace isom
