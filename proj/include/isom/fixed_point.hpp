#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "isom/error.hpp"
#include "isom/types.hpp"

namespace isom {

struct FixedPointOptions {
    double tol = 1e-12;  // on ||phi(x) - x||_inf, relative to the caller's residual scale
    std::size_t max_iters = 10000;
    double damping = 0.5;
    double min_damping = 1e-3;
    std::size_t broyden_iters = 200;
    bool record_trace = true;
};

/// Outcome of one fixed-point solve x = phi(x) on a box [0, eps_box]^m.
struct FixedPointReport {
    std::size_t iterations = 0;
    double final_residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    double eps_box = 0.0;
    std::string method = "picard";
    std::vector<double> trace;
    // Box diagnostics over every evaluated iterate: the smallest phi_i and the
    // largest phi_i / (upper bound)_i. Filled in by the embedding drivers.
    double min_phi = std::numeric_limits<double>::infinity();
    double max_upper_ratio = 0.0;
};

struct FixedPointSolution {
    Vector x;
    FixedPointReport report;
};

namespace detail {

inline double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace detail

/// Solves x = phi(x) starting from x0. Damped Picard iteration
/// x <- (1 - lambda) x + lambda phi(x), halving lambda whenever the residual
/// grows; if that has not converged after max_iters, Broyden's method on
/// psi(x) = phi(x) - x takes over with initial Jacobian -I. Iterates of the
/// fallback are clamped to [lower, upper] componentwise.
///
/// Exceptions thrown by phi propagate unchanged. Non-convergence is reported
/// through `converged`, not thrown.
inline FixedPointSolution solve_fixed_point(const std::function<Vector(const Vector&)>& phi, Vector x0,
                                            double residual_scale, const FixedPointOptions& opts, double lower = 0.0,
                                            double upper = std::numeric_limits<double>::infinity()) {
    FixedPointSolution sol;
    auto& rep = sol.report;
    const double tol = opts.tol * residual_scale;

    Vector x = std::move(x0);
    Vector fx = phi(x);
    double r = detail::inf_norm(fx - x);
    if (opts.record_trace) rep.trace.push_back(r);

    double lambda = opts.damping;
    std::size_t it = 0;
    while (r > tol && it < opts.max_iters) {
        Vector next = (1.0 - lambda) * x + lambda * fx;
        Vector fnext = phi(next);
        const double rnext = detail::inf_norm(fnext - next);
        if (rnext > r) lambda = std::max(opts.min_damping, 0.5 * lambda);
        x = std::move(next);
        fx = std::move(fnext);
        r = rnext;
        ++it;
        if (opts.record_trace) rep.trace.push_back(r);
    }

    if (r > tol && opts.broyden_iters > 0) {
        rep.method = "broyden";
        const auto m = x.size();
        Matrix jac = -Matrix::Identity(m, m);
        Vector psi = fx - x;
        for (std::size_t b = 0; b < opts.broyden_iters && r > tol; ++b) {
            Vector step = jac.partialPivLu().solve(-psi);
            Vector next = (x + step).cwiseMax(lower).cwiseMin(upper);
            step = next - x;
            const double step_sq = step.squaredNorm();
            if (step_sq == 0.0) break;
            Vector fnext = phi(next);
            Vector psi_next = fnext - next;
            jac += ((psi_next - psi) - jac * step) * step.transpose() / step_sq;
            x = std::move(next);
            psi = std::move(psi_next);
            fx = std::move(fnext);
            r = detail::inf_norm(psi);
            ++it;
            if (opts.record_trace) rep.trace.push_back(r);
        }
    }

    rep.iterations = it;
    rep.final_residual = r;
    rep.converged = r <= tol;
    sol.x = std::move(x);
    return sol;
}

}  // namespace isom
