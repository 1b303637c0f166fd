#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "isom/error.hpp"
#include "isom/types.hpp"

namespace isom {

class NormSpec;

/// Weighted l_p norm, (sum |w_i x_i|^p)^(1/p); p = infinity means max |w_i x_i|.
struct LpNorm {
    double p = 2.0;
    std::size_t dim = 0;
    std::vector<double> weights;  // empty means unit weights
};

/// Minkowski functional of a symmetric convex polygon in R^2 (vertices stored counter-clockwise).
struct CurveNorm {
    std::vector<Eigen::Vector2d> vertices;
    double inner_radius = 0.0;  // distance from the origin to the nearest edge line
    double outer_radius = 0.0;  // largest vertex length
};

/// Euclidean norm on R^2 except inside the sectors of half-width eps around the
/// directions pi/4 and 5pi/4, where the unit sphere follows C(eps)*||x||_{3/2} = 1.
struct SectorNorm {
    double eps = 0.1;
    double c = 1.0;
};

/// (block_1 (+) ... (+) block_m)_outer_p on the concatenated coordinates.
struct DirectSumNorm {
    double outer_p = 2.0;
    std::vector<NormSpec> blocks;
};

struct ScaledNorm {
    std::shared_ptr<const NormSpec> inner;
    double c = 1.0;
};

inline double sector_constant(double eps);
inline double sector_constant_at(double theta);

/// Declarative description of a norm on R^dim. Immutable once built; use the
/// named constructors, which validate their arguments.
class NormSpec {
public:
    using Variant = std::variant<LpNorm, CurveNorm, SectorNorm, DirectSumNorm, ScaledNorm>;

    static NormSpec lp(double p, std::size_t dim) {
        check_p(p);
        if (dim == 0) throw Error(ErrorKind::InvalidNorm, "l_p norm needs dim >= 1");
        return NormSpec(LpNorm{p, dim, {}}, dim);
    }

    static NormSpec weighted_lp(double p, std::vector<double> weights) {
        check_p(p);
        if (weights.empty()) throw Error(ErrorKind::InvalidNorm, "weighted l_p norm needs at least one weight");
        for (double w : weights) {
            if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidNorm, "weights must be positive and finite");
        }
        const auto dim = weights.size();
        return NormSpec(LpNorm{p, dim, std::move(weights)}, dim);
    }

    static NormSpec linf(std::size_t dim) { return lp(std::numeric_limits<double>::infinity(), dim); }

    /// Polygon given by its vertices in either orientation. The polygon must be
    /// convex, centrally symmetric and contain the origin in its interior.
    static NormSpec curve(std::vector<Eigen::Vector2d> vertices);

    /// Curve sampled as a radial function r(theta_k) on theta_k = 2*pi*k/m.
    static NormSpec curve_from_radial(const std::vector<double>& radii);

    static NormSpec sector(double eps) { return NormSpec(SectorNorm{eps, sector_constant(eps)}, 2); }

    static NormSpec direct_sum(double outer_p, std::vector<NormSpec> blocks) {
        check_p(outer_p);
        if (blocks.empty()) throw Error(ErrorKind::InvalidNorm, "direct sum needs at least one block");
        std::size_t dim = 0;
        for (const auto& b : blocks) dim += b.dim();
        return NormSpec(DirectSumNorm{outer_p, std::move(blocks)}, dim);
    }

    static NormSpec scaled(NormSpec inner, double c) {
        if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::InvalidNorm, "scale factor must be positive and finite");
        const auto dim = inner.dim();
        return NormSpec(ScaledNorm{std::make_shared<const NormSpec>(std::move(inner)), c}, dim);
    }

    std::size_t dim() const noexcept { return dim_; }
    const Variant& variant() const noexcept { return v_; }

private:
    NormSpec(Variant v, std::size_t dim) : v_(std::move(v)), dim_(dim) {}

    static void check_p(double p) {
        if (!(p >= 1.0)) throw Error(ErrorKind::InvalidNorm, "p must lie in [1, inf]");
    }

    Variant v_;
    std::size_t dim_ = 0;
};

namespace detail {

inline double combine_lp(double p, const Eigen::Ref<const Vector>& values) {
    const double m = values.cwiseAbs().maxCoeff();
    if (m == 0.0 || std::isinf(p)) return m;
    if (p == 1.0) return values.cwiseAbs().sum();
    if (p == 2.0) return m * (values / m).norm();
    double s = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) s += std::pow(std::abs(values[i]) / m, p);
    return m * std::pow(s, 1.0 / p);
}

inline double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

// Maps x to the representative of {x, -x} in the closed upper half-plane, so
// that evaluation is exactly symmetric.
inline Eigen::Vector2d upper_half(const Eigen::Vector2d& x) {
    if (x.y() < 0.0 || (x.y() == 0.0 && x.x() < 0.0)) return -x;
    return x;
}

inline bool inside_polygon(const std::vector<Eigen::Vector2d>& verts, const Eigen::Vector2d& y) {
    const auto n = verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = verts[i];
        const auto& b = verts[(i + 1) % n];
        if (cross(b - a, y - a) < 0.0) return false;
    }
    return true;
}

inline double evaluate_curve(const CurveNorm& curve, const Eigen::Vector2d& raw) {
    const Eigen::Vector2d x = upper_half(raw);
    const double len = x.norm();
    if (len == 0.0) return 0.0;
    // p(x) = inf{lambda : x / lambda inside}; bracket from the in/out radii.
    double lo = len / curve.outer_radius;
    double hi = len / curve.inner_radius;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (inside_polygon(curve.vertices, x / mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline bool in_bad_sector(double theta, double eps) {
    constexpr double quarter = std::numbers::pi / 4.0;
    return theta >= quarter - eps && theta <= quarter + eps;
}

inline double evaluate_sector(const SectorNorm& s, const Eigen::Vector2d& raw) {
    const Eigen::Vector2d x = upper_half(raw);
    if (x.x() == 0.0 && x.y() == 0.0) return 0.0;
    const double theta = std::atan2(x.y(), x.x());
    if (in_bad_sector(theta, s.eps)) {
        const double a = std::pow(x.x(), 1.5) + std::pow(x.y(), 1.5);
        return s.c * std::pow(a, 2.0 / 3.0);
    }
    return std::hypot(x.x(), x.y());
}

inline double evaluate_block(const NormSpec& z, const Eigen::Ref<const Vector>& x);

struct BlockEvaluator {
    const Eigen::Ref<const Vector>& x;

    double operator()(const LpNorm& n) const {
        if (n.weights.empty()) return combine_lp(n.p, x);
        const Eigen::Map<const Vector> w(n.weights.data(), static_cast<Eigen::Index>(n.weights.size()));
        return combine_lp(n.p, x.cwiseProduct(w));
    }
    double operator()(const CurveNorm& n) const { return evaluate_curve(n, Eigen::Vector2d(x[0], x[1])); }
    double operator()(const SectorNorm& n) const { return evaluate_sector(n, Eigen::Vector2d(x[0], x[1])); }
    double operator()(const DirectSumNorm& n) const {
        Vector parts(static_cast<Eigen::Index>(n.blocks.size()));
        Eigen::Index offset = 0;
        for (std::size_t b = 0; b < n.blocks.size(); ++b) {
            const auto len = static_cast<Eigen::Index>(n.blocks[b].dim());
            parts[static_cast<Eigen::Index>(b)] = evaluate_block(n.blocks[b], x.segment(offset, len));
            offset += len;
        }
        return combine_lp(n.outer_p, parts);
    }
    double operator()(const ScaledNorm& n) const { return n.c * evaluate_block(*n.inner, x); }
};

inline double evaluate_block(const NormSpec& z, const Eigen::Ref<const Vector>& x) {
    return std::visit(BlockEvaluator{x}, z.variant());
}

}  // namespace detail

/// ||x||_Z. Throws DimensionMismatch when x does not live in R^{Z.dim()}.
inline double evaluate(const NormSpec& z, const Eigen::Ref<const Vector>& x) {
    if (static_cast<std::size_t>(x.size()) != z.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "vector has " + std::to_string(x.size()) + " coordinates, norm acts on R^" + std::to_string(z.dim()));
    }
    return detail::evaluate_block(z, x);
}

/// ||x||_Z for x given in the leading coordinates of R^{Z.dim()}; the rest are zero.
inline double evaluate_padded(const NormSpec& z, const Eigen::Ref<const Vector>& x) {
    if (static_cast<std::size_t>(x.size()) == z.dim()) return evaluate(z, x);
    if (static_cast<std::size_t>(x.size()) > z.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "vector longer than the norm's dimension");
    }
    Vector full = Vector::Zero(static_cast<Eigen::Index>(z.dim()));
    full.head(x.size()) = x;
    return detail::evaluate_block(z, full);
}

/// C at a sector boundary angle theta: ((cos t)^{3/2} + (sin t)^{3/2})^{-2/3}.
inline double sector_constant_at(double theta) {
    const double a = std::pow(std::cos(theta), 1.5) + std::pow(std::sin(theta), 1.5);
    return std::pow(a, -2.0 / 3.0);
}

/// The constant making the 3/2-curve meet the unit circle on both boundary rays
/// pi/4 -+ eps (the curve is symmetric about pi/4, so one constant serves both).
inline double sector_constant(double eps) {
    if (!(eps > 0.0 && eps < std::numbers::pi / 4.0)) {
        throw Error(ErrorKind::EpsOutOfRange, "sector half-width must lie in (0, pi/4)");
    }
    return sector_constant_at(std::numbers::pi / 4.0 - eps);
}

inline NormSpec NormSpec::curve(std::vector<Eigen::Vector2d> vertices) {
    const auto n = vertices.size();
    if (n < 4 || n % 2 != 0) {
        throw Error(ErrorKind::InvalidNorm, "a symmetric polygon needs an even number (>= 4) of vertices");
    }
    double area2 = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!vertices[i].allFinite()) throw Error(ErrorKind::InvalidNorm, "non-finite vertex");
        area2 += detail::cross(vertices[i], vertices[(i + 1) % n]);
        scale = std::max(scale, vertices[i].norm());
    }
    if (area2 < 0.0) std::reverse(vertices.begin(), vertices.end());
    if (!(scale > 0.0)) throw Error(ErrorKind::InvalidNorm, "degenerate polygon");

    const double tol = 1e-9 * scale;
    for (const auto& v : vertices) {
        bool found = false;
        for (const auto& w : vertices) {
            if ((v + w).norm() <= tol) {
                found = true;
                break;
            }
        }
        if (!found) throw Error(ErrorKind::InvalidNorm, "vertex set is not symmetric under x -> -x");
    }

    CurveNorm c;
    c.inner_radius = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[(i + 1) % n];
        const auto& next = vertices[(i + 2) % n];
        const Eigen::Vector2d edge = b - a;
        if (edge.norm() <= tol) throw Error(ErrorKind::InvalidNorm, "repeated vertex");
        if (detail::cross(edge, next - b) < -tol * scale) throw Error(ErrorKind::InvalidNorm, "polygon is not convex");
        // distance from the origin to the edge's supporting line
        const double dist = detail::cross(edge, -a) / edge.norm();
        if (!(dist > tol)) {
            throw Error(ErrorKind::InvalidNorm, "origin is not in the interior of the polygon");
        }
        c.inner_radius = std::min(c.inner_radius, dist);
    }
    c.outer_radius = scale;
    c.vertices = std::move(vertices);
    return NormSpec(std::move(c), 2);
}

inline NormSpec NormSpec::curve_from_radial(const std::vector<double>& radii) {
    const auto m = radii.size();
    if (m < 4 || m % 2 != 0) throw Error(ErrorKind::InvalidNorm, "radial samples must have even length >= 4");
    std::vector<Eigen::Vector2d> verts;
    verts.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (!(radii[k] > 0.0)) throw Error(ErrorKind::InvalidNorm, "radii must be positive");
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
        verts.emplace_back(radii[k] * std::cos(t), radii[k] * std::sin(t));
    }
    return curve(std::move(verts));
}

}  // namespace isom
