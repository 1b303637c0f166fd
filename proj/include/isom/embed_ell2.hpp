#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "isom/cayley_menger.hpp"
#include "isom/embedding.hpp"
#include "isom/fixed_point.hpp"
#include "isom/metric.hpp"
#include "isom/norm.hpp"

namespace isom {

struct StepResult {
    Vector point;  // in R^{k+1} for a base of k+1 points
    FixedPointReport report;
};

namespace detail {

// Every corner of [0, e]^m when m is small, otherwise the corners with at most
// two raised coordinates plus the all-raised corner.
inline std::vector<Vector> box_corners(Eigen::Index m, double e) {
    std::vector<Vector> out;
    if (m <= 10) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
            Vector c = Vector::Zero(m);
            for (Eigen::Index i = 0; i < m; ++i)
                if (mask & (std::size_t{1} << i)) c[i] = e;
            out.push_back(std::move(c));
        }
        return out;
    }
    out.push_back(Vector::Zero(m));
    out.push_back(Vector::Constant(m, e));
    for (Eigen::Index i = 0; i < m; ++i) {
        out.push_back(Vector::Unit(m, i) * e);
        for (Eigen::Index j = i + 1; j < m; ++j) out.push_back((Vector::Unit(m, i) + Vector::Unit(m, j)) * e);
    }
    return out;
}

inline bool perturbed_step_valid(const PointConfig& base, const Vector& target, double e) {
    for (const auto& c : box_corners(target.size(), e)) {
        const Vector t = target + c;
        try {
            (void)append_point(base, std::span<const double>(t.data(), static_cast<std::size_t>(t.size())));
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// Largest width e (up to bisection accuracy) for which every corner of
/// [0, e]^m still gives a Euclidean-realizable perturbed space. Bracketed by
/// doubling from 1e-3 times the smallest relevant distance, then bisected.
inline double realizable_box_width(const PointConfig& base, const Vector& target) {
    double min_dist = target.minCoeff();
    for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t j = i + 1; j < base.size(); ++j) min_dist = std::min(min_dist, (base[i] - base[j]).norm());
    double e = 1e-3 * min_dist;
    int guard = 0;
    while (!detail::perturbed_step_valid(base, target, e) && guard++ < 40) e *= 0.5;
    double valid = e;
    const double cap = target.maxCoeff();
    double invalid = 0.0;
    for (int i = 0; i < 40; ++i) {
        if (2.0 * valid > cap) break;
        if (!detail::perturbed_step_valid(base, target, 2.0 * valid)) {
            invalid = 2.0 * valid;
            break;
        }
        valid *= 2.0;
    }
    for (int i = 0; i < 12 && invalid > 0.0; ++i) {
        const double mid = 0.5 * (valid + invalid);
        (detail::perturbed_step_valid(base, target, mid) ? valid : invalid) = mid;
    }
    return valid;
}

/// Default box half-width for a step: half of realizable_box_width.
inline double default_eps_box(const PointConfig& base, const Vector& target) {
    return 0.5 * realizable_box_width(base, target);
}

/// One inductive step: given the images f(p_0..p_k) (canonical form, leading k
/// coordinates) and the distances d(p_i, p_{k+1}), finds eps* with phi(eps*) = eps*
/// where phi_i(eps) = d_i + eps_i - ||g(eps) - f(p_i)||_Z and g(eps) is the
/// trilateration point for the perturbed distances d_i + eps_i. The returned
/// point g(eps*) has Z-distance d_i to f(p_i).
///
/// At every evaluated iterate the bounds 0 <= phi_i <= delta/(delta+1) (d_i + eps_i)
/// and phi_i <= eps_box are asserted (EpsBoxEscape); a perturbed space that is no
/// longer Euclidean-realizable raises QInvalid; non-convergence raises SolverStalled.
inline StepResult step_extend(const PointConfig& base_image, const Matrix& base_euclid_dists, const Vector& target,
                              const NormSpec& z, double eps_box, double delta, const EmbedOptions& opts) {
    const auto m = static_cast<Eigen::Index>(base_image.size());
    if (target.size() != m) throw Error(ErrorKind::InvalidArgument, "one target distance per base point is required");
    if (base_euclid_dists.rows() != m || base_euclid_dists.cols() != m) {
        throw Error(ErrorKind::InvalidArgument, "base distance matrix has the wrong size");
    }
    if (!(eps_box > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps_box must be positive");
    if (static_cast<std::size_t>(m) > z.dim()) throw Error(ErrorKind::DimensionMismatch, "norm dimension too small");

    const PointConfig base = base_image.resized(static_cast<std::size_t>(m - 1));
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            const double e = (base[static_cast<std::size_t>(i)] - base[static_cast<std::size_t>(j)]).norm();
            if (std::abs(e - base_euclid_dists(i, j)) > 1e-9 * std::max(1.0, base_euclid_dists.maxCoeff())) {
                throw Error(ErrorKind::InvalidArgument, "base distances do not match the base image");
            }
        }

    std::vector<Vector> padded;
    for (const auto& b : base.points()) {
        Vector q = Vector::Zero(m);
        q.head(m - 1) = b;
        padded.push_back(std::move(q));
    }

    const double scale = target.maxCoeff();
    const double slack = opts.box_slack * scale;
    const double shrink = delta / (delta + 1.0);

    FixedPointReport diag;
    auto g = [&](const Vector& eps) {
        const Vector t = target + eps;
        try {
            return append_point(base, std::span<const double>(t.data(), static_cast<std::size_t>(t.size())));
        } catch (const Error& e) {
            throw Error(ErrorKind::QInvalid,
                        std::string("perturbed distances are not Euclidean-realizable (") + e.what() + ")");
        }
    };
    auto phi = [&](const Vector& eps) {
        const Vector x = g(eps);
        Vector y(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double zdist = evaluate_padded(z, x - padded[static_cast<std::size_t>(i)]);
            const double yi = target[i] + eps[i] - zdist;
            const double upper = shrink * (target[i] + eps[i]);
            diag.min_phi = std::min(diag.min_phi, yi);
            if (upper > 0.0) diag.max_upper_ratio = std::max(diag.max_upper_ratio, yi / upper);
            if (yi < -slack) {
                throw Error(ErrorKind::EpsBoxEscape, "phi_" + std::to_string(i) + " < 0: the norm is not majorized by l_2");
            }
            if (yi > upper + slack) {
                throw Error(ErrorKind::EpsBoxEscape,
                            "phi_" + std::to_string(i) + " exceeds delta/(delta+1) * d: the sampled delta is too small");
            }
            if (yi > eps_box + slack) {
                throw Error(ErrorKind::EpsBoxEscape, "phi_" + std::to_string(i) + " leaves [0, eps_box]");
            }
            y[i] = std::clamp(yi, 0.0, eps_box);
        }
        return y;
    };

    auto sol = solve_fixed_point(phi, Vector::Zero(m), scale, opts.solver, 0.0, eps_box);
    sol.report.eps_box = eps_box;
    sol.report.min_phi = diag.min_phi;
    sol.report.max_upper_ratio = diag.max_upper_ratio;
    if (!sol.report.converged) {
        throw Error(ErrorKind::SolverStalled, "fixed-point iteration did not converge (residual " +
                                                  std::to_string(sol.report.final_residual) + ")");
    }
    return {g(sol.x), std::move(sol.report)};
}

/// Isometric embedding of an affinely independent Euclidean metric space into
/// (R^{Z.dim}, Z) for Z close to l_2. Points are placed one at a time in
/// span{e_1..e_k}; each placement solves the fixed-point equation of step_extend.
///
/// If sampling shows ||x||_Z > ||x||_2 somewhere, Z is rescaled (auto_normalize)
/// and the result is certified in the rescaled norm, recorded in `norm`.
inline EmbeddingResult embed_affinely_independent(const MetricSpace& m, const NormSpec& z,
                                                  const EmbedOptions& opts = {}) {
    const auto n = m.size();
    const auto cm = sign_sequence_check(m);
    if (!cm.signs_ok) {
        throw Error(ErrorKind::NotAffinelyIndependent,
                    "Cayley-Menger sign test fails at k = " + std::to_string(*cm.first_failure), {*cm.first_failure});
    }
    if (z.dim() + 1 < n) {
        throw Error(ErrorKind::DimensionMismatch, "an " + std::to_string(n) + "-point space needs a norm on R^" +
                                                      std::to_string(n - 1) + " or larger");
    }
    const auto zdim = static_cast<Eigen::Index>(z.dim());
    const std::size_t sub = n - 1;

    detail::Normalization norm{z, 1.0, 0.0};
    if (sub >= 1) norm = detail::normalize_against(z, NormSpec::lp(2.0, z.dim()), sub, opts);
    const NormSpec& zn = norm.norm;

    PointConfig image(z.dim());
    std::vector<FixedPointReport> reports;
    image.push_back(Vector::Zero(zdim));
    if (n >= 2) {
        image.push_back(Vector::Unit(zdim, 0) * (m(0, 1) / evaluate(zn, Vector::Unit(zdim, 0))));
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const auto count = static_cast<Eigen::Index>(k + 1);
        PointConfig base(k);
        for (std::size_t i = 0; i <= k; ++i) base.push_back(image[i].head(static_cast<Eigen::Index>(k)));
        Matrix euclid(count, count);
        for (Eigen::Index i = 0; i < count; ++i)
            for (Eigen::Index j = 0; j < count; ++j)
                euclid(i, j) = (base[static_cast<std::size_t>(i)] - base[static_cast<std::size_t>(j)]).norm();
        Vector target(count);
        for (Eigen::Index i = 0; i < count; ++i) target[i] = m(static_cast<std::size_t>(i), k + 1);

        StepResult step;
        try {
            if (opts.eps_box) {
                step = step_extend(base, euclid, target, zn, *opts.eps_box, norm.delta, opts);
            } else {
                // Half the verified width first, then doubling on escape. Past the
                // verified width, realizability is only checked at the iterates.
                const double cap = target.maxCoeff();
                for (double box = 0.5 * realizable_box_width(base, target);; box *= 2.0) {
                    try {
                        step = step_extend(base, euclid, target, zn, std::min(box, cap), norm.delta, opts);
                        break;
                    } catch (const Error& e) {
                        if (e.kind() != ErrorKind::EpsBoxEscape || box >= cap) throw;
                    }
                }
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::EpsBoxEscape || e.kind() == ErrorKind::QInvalid) {
                throw Error(ErrorKind::NormTooFar, "placing point " + std::to_string(k + 1) + ": " + e.what(), {k + 1});
            }
            if (e.kind() == ErrorKind::SolverStalled) {
                throw Error(ErrorKind::SolverStalled, "placing point " + std::to_string(k + 1) + ": " + e.what(),
                            {k + 1});
            }
            throw;
        }
        Vector full = Vector::Zero(zdim);
        full.head(step.point.size()) = step.point;
        image.push_back(std::move(full));
        reports.push_back(std::move(step.report));
    }

    const auto cert = certify(m, image, zn);
    return EmbeddingResult{std::move(image), cert.max_abs_err, cert.max_rel_err, opts.tol,
                           cert.max_rel_err <= opts.tol, std::move(reports), zn, norm.scale, norm.delta, "ell2"};
}

}  // namespace isom
