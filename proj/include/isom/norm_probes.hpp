#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "isom/error.hpp"
#include "isom/norm.hpp"
#include "isom/types.hpp"

namespace isom {

/// Options shared by the sampling-based norm probes. Results are deterministic
/// for fixed options; `threads` only changes how sample evaluation is split.
struct ProbeOptions {
    std::size_t n_samples = 2000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t refine_starts = 4;
    /// Probe the restriction to span{e_1..e_k} when nonzero.
    std::size_t subspace_dim = 0;
};

/// Sampled range of ||x||_ref / ||x||_Z. Both ends are estimates: the true
/// minimum may lie below c_lo and the true maximum above c_hi.
struct EquivalenceEstimate {
    double c_lo = 0.0;
    double c_hi = 0.0;
    Vector argmin;
    Vector argmax;

    /// Upper bound on the Banach-Mazur distance obtained from the identity map.
    double banach_mazur_bound() const { return c_hi / c_lo; }
};

struct FlatPair {
    Vector x;
    Vector y;
    double sum_norm = 0.0;
};

struct ConvexityReport {
    double min_margin = std::numeric_limits<double>::infinity();  // min of 2 - ||x + y||
    std::size_t pairs_checked = 0;
    std::optional<FlatPair> violation;

    bool strictly_convex_evidence() const { return !violation.has_value(); }
};

namespace detail {

// Generator of the R_d low-discrepancy sequence: phi_d is the positive root of x^{d+1} = x + 1.
inline double rd_generator(std::size_t d) {
    double x = 2.0;
    for (int i = 0; i < 64; ++i) x = std::pow(1.0 + x, 1.0 / static_cast<double>(d + 1));
    return x;
}

/// Deterministic unit directions in R^d: golden-angle spiral for d = 2, an R_d
/// sequence pushed through the Gaussian quantile for d >= 3, plus structured
/// directions (axes, pairwise diagonals, sign corners) where l_p-type norms
/// attain their extremes.
inline std::vector<Vector> sphere_directions(std::size_t d, std::size_t n, std::uint64_t seed) {
    std::vector<Vector> dirs;
    const auto di = static_cast<Eigen::Index>(d);
    if (d == 1) {
        dirs.push_back(Vector::Ones(1));
        return dirs;
    }
    const double seed_shift = static_cast<double>(seed % 1000003);
    if (d == 2) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        const double phase = std::fmod(seed_shift * 0.6180339887498949, 1.0) * 2.0 * std::numbers::pi;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = phase + golden * static_cast<double>(k);
            Vector v(2);
            v << std::cos(t), std::sin(t);
            dirs.push_back(std::move(v));
        }
    } else {
        const double g = rd_generator(d);
        std::vector<double> alpha(d);
        for (std::size_t j = 0; j < d; ++j) alpha[j] = std::fmod(std::pow(1.0 / g, static_cast<double>(j + 1)), 1.0);
        for (std::size_t k = 1; k <= n; ++k) {
            Vector v(di);
            for (std::size_t j = 0; j < d; ++j) {
                double u = std::fmod(0.5 + (static_cast<double>(k) + seed_shift) * alpha[j], 1.0);
                u = std::clamp(u, 1e-12, 1.0 - 1e-12);
                v[static_cast<Eigen::Index>(j)] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
            }
            const double len = v.norm();
            if (len > 0.0) dirs.push_back(v / len);
        }
    }
    for (Eigen::Index i = 0; i < di; ++i) {
        dirs.push_back(Vector::Unit(di, i));
        for (Eigen::Index j = i + 1; j < di; ++j) {
            Vector a = Vector::Unit(di, i) + Vector::Unit(di, j);
            Vector b = Vector::Unit(di, i) - Vector::Unit(di, j);
            dirs.push_back(a.normalized());
            dirs.push_back(b.normalized());
        }
    }
    if (d >= 3 && d <= 12) {
        const std::size_t corners = std::size_t{1} << (d - 1);
        for (std::size_t mask = 0; mask < corners; ++mask) {
            Vector v = Vector::Ones(di);
            for (std::size_t j = 1; j < d; ++j) {
                if (mask & (std::size_t{1} << (j - 1))) v[static_cast<Eigen::Index>(j)] = -1.0;
            }
            dirs.push_back(v.normalized());
        }
    }
    return dirs;
}

inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count < 2 * threads) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] {
            for (std::size_t i = begin; i < end; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Golden-section search for a maximum of f on [a, b] (f unimodal near the start).
inline std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Local maximization of f over the unit sphere from `start`. In two dimensions a
// golden-section search in the angle; otherwise a compass search in the ambient
// coordinates followed by renormalization.
inline std::pair<Vector, double> refine_on_sphere(const std::function<double(const Vector&)>& f, const Vector& start,
                                                  double step) {
    if (start.size() == 2) {
        const double t0 = std::atan2(start[1], start[0]);
        auto g = [&](double t) {
            Vector v(2);
            v << std::cos(t), std::sin(t);
            return f(v);
        };
        auto [t, val] = golden_max(g, t0 - step, t0 + step, 1e-12);
        Vector best(2);
        best << std::cos(t), std::sin(t);
        const double f0 = f(start);
        if (f0 >= val) return {start, f0};
        return {best, val};
    }
    Vector best = start;
    double best_val = f(best);
    const auto d = start.size();
    for (double s = step; s > 1e-10; s *= 0.5) {
        bool improved = true;
        int guard = 0;
        while (improved && guard++ < 100) {
            improved = false;
            for (Eigen::Index i = 0; i < d; ++i) {
                for (double sign : {1.0, -1.0}) {
                    Vector trial = best;
                    trial[i] += sign * s;
                    const double len = trial.norm();
                    if (len == 0.0) continue;
                    trial /= len;
                    const double v = f(trial);
                    if (v > best_val) {
                        best = std::move(trial);
                        best_val = v;
                        improved = true;
                    }
                }
            }
        }
    }
    return {best, best_val};
}

inline std::size_t probe_dim(const NormSpec& z, const ProbeOptions& opts) {
    if (opts.subspace_dim == 0) return z.dim();
    if (opts.subspace_dim > z.dim()) throw Error(ErrorKind::DimensionMismatch, "subspace larger than the norm's space");
    return opts.subspace_dim;
}

}  // namespace detail

/// Estimates min and max of ||x||_reference / ||x||_Z over the unit sphere by
/// deterministic sampling followed by local refinement of the best candidates.
inline EquivalenceEstimate equivalence_constants(const NormSpec& z, const NormSpec& reference,
                                                 const ProbeOptions& opts = {}) {
    if (z.dim() != reference.dim()) throw Error(ErrorKind::DimensionMismatch, "norms act on different spaces");
    if (opts.n_samples < 100) throw Error(ErrorKind::InvalidArgument, "equivalence_constants needs n_samples >= 100");
    const auto d = detail::probe_dim(z, opts);

    auto ratio = [&](const Vector& x) { return evaluate_padded(reference, x) / evaluate_padded(z, x); };
    const auto dirs = detail::sphere_directions(d, opts.n_samples, opts.seed);
    std::vector<double> values(dirs.size());
    detail::parallel_for(dirs.size(), opts.threads, [&](std::size_t i) { values[i] = ratio(dirs[i]); });

    std::vector<std::size_t> order(dirs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    const double step = d == 2 ? 4.0 * std::numbers::pi / static_cast<double>(opts.n_samples)
                               : 2.0 / std::pow(static_cast<double>(opts.n_samples), 1.0 / static_cast<double>(d - 1));
    const std::size_t starts = std::min(opts.refine_starts, order.size());

    EquivalenceEstimate est;
    est.c_lo = values[order.front()];
    est.argmin = dirs[order.front()];
    est.c_hi = values[order.back()];
    est.argmax = dirs[order.back()];
    auto neg_ratio = [&](const Vector& x) { return -ratio(x); };
    for (std::size_t s = 0; s < starts; ++s) {
        auto [vmin, fmin] = detail::refine_on_sphere(neg_ratio, dirs[order[s]], step);
        if (-fmin < est.c_lo) {
            est.c_lo = -fmin;
            est.argmin = vmin;
        }
        auto [vmax, fmax] = detail::refine_on_sphere(ratio, dirs[order[order.size() - 1 - s]], step);
        if (fmax > est.c_hi) {
            est.c_hi = fmax;
            est.argmax = vmax;
        }
    }
    return est;
}

/// Looks for a segment on the unit sphere of Z: pairs x != y of unit vectors
/// with ||x + y|| >= 2 - tau. A found pair certifies that Z is not strictly
/// convex; finding none is evidence only.
inline ConvexityReport strict_convexity_probe(const NormSpec& z, const ProbeOptions& opts = {.n_samples = 400},
                                              double tau = 1e-12) {
    if (opts.n_samples < 100) throw Error(ErrorKind::InvalidArgument, "strict_convexity_probe needs n_samples >= 100");
    const auto d = detail::probe_dim(z, opts);
    auto dirs = detail::sphere_directions(d, opts.n_samples, opts.seed);
    for (auto& v : dirs) v /= evaluate_padded(z, v);

    ConvexityReport report;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
            if ((dirs[i] - dirs[j]).norm() <= 1e-9) continue;
            const double s = evaluate_padded(z, dirs[i] + dirs[j]);
            ++report.pairs_checked;
            const double margin = 2.0 - s;
            if (margin < report.min_margin) report.min_margin = margin;
            if (s >= 2.0 - tau) {
                report.violation = FlatPair{dirs[i], dirs[j], s};
                return report;
            }
        }
    }
    return report;
}

}  // namespace isom
