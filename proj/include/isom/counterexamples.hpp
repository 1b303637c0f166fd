#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "isom/error.hpp"
#include "isom/metric.hpp"
#include "isom/norm.hpp"
#include "isom/norm_probes.hpp"
#include "isom/types.hpp"

namespace isom {

struct SquareExample {
    MetricSpace metric;
    PointConfig points;
};

/// S = {(0,0), (1,0), (0,1), (1,1)} with its l_1 metric: sides 1, both diagonals 2.
/// (1,0) and (0,1) are both metric midpoints of (0,0) and (1,1).
inline SquareExample square_example() {
    PointConfig pts(2);
    for (auto [x, y] : {std::array{0.0, 0.0}, std::array{1.0, 0.0}, std::array{0.0, 1.0}, std::array{1.0, 1.0}}) {
        Vector v(2);
        v << x, y;
        pts.push_back(std::move(v));
    }
    const auto l1 = distance_matrix_of(pts, NormSpec::lp(1.0, 2));
    return {validate_metric(l1.matrix(), {"(0,0)", "(1,0)", "(0,1)", "(1,1)"}), std::move(pts)};
}

/// Evidence that a metric space cannot embed isometrically into Z: a pair with
/// two distinct metric midpoints, while Z shows no flat segment on its sampled
/// unit sphere. The strict convexity of Z is sampled, not proven.
struct MidpointObstruction {
    std::size_t i = 0;
    std::size_t j = 0;
    std::vector<std::size_t> midpoints;
    double probe_margin = 0.0;
    std::size_t pairs_checked = 0;
};

/// Returns an obstruction certificate, or nullopt when none is found (no pair
/// with two midpoints, or the probe found Z not strictly convex).
inline std::optional<MidpointObstruction> midpoint_obstruction(const MetricSpace& m, const NormSpec& z,
                                                               std::size_t probe_samples = 400) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            auto mids = metric_midpoints(m, i, j);
            if (mids.size() < 2) continue;
            ProbeOptions opts;
            opts.n_samples = probe_samples;
            const auto probe = strict_convexity_probe(z, opts);
            if (!probe.strictly_convex_evidence()) return std::nullopt;
            return MidpointObstruction{i, j, std::move(mids), probe.min_margin, probe.pairs_checked};
        }
    return std::nullopt;
}

/// The four-point space {a, b, c, d}: d(a, .) = 1, d(b,c) = d(c,d) = eps/2,
/// d(b,d) = eps, so c is the unique midpoint of b and d.
inline MetricSpace prop48_metric(double eps) {
    if (!(eps > 0.0 && eps <= 2.0)) throw Error(ErrorKind::EpsOutOfRange, "eps must lie in (0, 2]");
    Matrix d(4, 4);
    // clang-format off
    d << 0.0, 1.0,       1.0,       1.0,
         1.0, 0.0,       eps / 2.0, eps,
         1.0, eps / 2.0, 0.0,       eps / 2.0,
         1.0, eps,       eps / 2.0, 0.0;
    // clang-format on
    return validate_metric(d, {"a", "b", "c", "d"});
}

/// Near-isometric image of prop48_metric(eps) in l_p^2: a -> 0, b -> x,
/// c -> (x + y)/2, d -> y with x = (s, eps/2), y = (s, -eps/2) on the unit
/// sphere. Only d(a, c) is off; the midpoint has norm s < 1 (midpoint_gap = 1 - s),
/// and s -> 1 as p -> infinity.
struct Prop48Witness {
    PointConfig points;
    NormSpec norm;
    double p = 2.0;
    double distortion = 1.0;
    double midpoint_gap = 0.0;
};

inline Prop48Witness prop48_witness(double eps, double p) {
    if (!(eps > 0.0 && eps < 2.0)) throw Error(ErrorKind::EpsOutOfRange, "witness needs eps in (0, 2)");
    if (!(p > 1.0)) throw Error(ErrorKind::InvalidArgument, "witness needs p > 1");
    const double t = eps / 2.0;
    const double s = std::isinf(p) ? 1.0 : std::pow(1.0 - std::pow(t, p), 1.0 / p);
    Vector a = Vector::Zero(2), b(2), c(2), d(2);
    b << s, t;
    c << s, 0.0;
    d << s, -t;
    PointConfig pts(2, {a, b, c, d});
    auto norm = NormSpec::lp(p, 2);
    const auto dist = correspondence_distortion(prop48_metric(eps), pts, norm);
    return Prop48Witness{std::move(pts), std::move(norm), p, dist.k, 1.0 - s};
}

/// The square example mapped by the identity into l_p^2 with p = 1 + 1/n.
/// Its distortion against the l_1 metric is 2^{1 - 1/p} = 2^{1/(n+1)}.
struct NearIsometricWitness {
    PointConfig points;
    NormSpec norm;
    double p = 2.0;
    double distortion = 1.0;
};

inline NearIsometricWitness near_isometric_witness(int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    const double p = 1.0 + 1.0 / static_cast<double>(n);
    auto sq = square_example();
    auto norm = NormSpec::lp(p, 2);
    const auto dist = correspondence_distortion(sq.metric, sq.points, norm);
    return NearIsometricWitness{std::move(sq.points), std::move(norm), p, dist.k};
}

/// Numerical replay of the sector-norm obstruction. Y = {(0,0), (1,1), (1,0)}
/// is embedded isometrically into the sector norm with (0,0) -> (0,0),
/// (1,0) -> (1,0) and (1,1) -> z on sqrt(2) S_Z with argument in the bad sector.
/// The midpoint (0.5, 0) of the first and last point is then forced to (0.5, 0),
/// and `gap` measures how far its Z-distance to z is from the l_2 distance
/// sqrt(1.25) it must have.
struct SectorObstruction {
    double eps = 0.0;
    Vector z;
    double z_argument = 0.0;
    bool z_in_bad_sector = false;
    bool joining_vector_in_good_sector = false;
    std::array<double, 3> embedded_distances{};  // |f(0,0)-f(1,1)|, |f(1,1)-f(1,0)|, |f(0,0)-f(1,0)|
    double max_embedding_error = 0.0;
    double required_distance = 0.0;  // sqrt(1.25)
    double midpoint_distance = 0.0;  // ||z - (0.5, 0)||_Z
    double gap = 0.0;
};

inline SectorObstruction sector_obstruction_demo(double eps) {
    if (!(eps > 0.0 && eps < std::numbers::pi / 8.0)) throw Error(ErrorKind::EpsOutOfRange, "eps must lie in (0, pi/8)");
    const auto norm = NormSpec::sector(eps);
    const double quarter = std::numbers::pi / 4.0;
    Vector e1(2);
    e1 << 1.0, 0.0;

    auto point_at = [&](double theta) {
        Vector u(2);
        u << std::cos(theta), std::sin(theta);
        return Vector(std::sqrt(2.0) * u / evaluate(norm, u));
    };
    auto h = [&](double theta) { return evaluate(norm, point_at(theta) - e1) - 1.0; };

    double lo = quarter - eps;
    double hi = quarter + eps;
    double hlo = h(lo);
    const double hhi = h(hi);
    if (!(hlo < 0.0 && hhi > 0.0)) {
        throw Error(ErrorKind::RootFindFailed, "no sign change of ||z - (1,0)|| - 1 across the bad sector");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double hm = h(mid);
        if (hm < 0.0) {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
        }
    }
    const double theta = 0.5 * (lo + hi);

    SectorObstruction out;
    out.eps = eps;
    out.z = point_at(theta);
    out.z_argument = theta;
    out.z_in_bad_sector = detail::in_bad_sector(theta, eps);

    const Vector zero = Vector::Zero(2);
    out.embedded_distances = {evaluate(norm, out.z - zero), evaluate(norm, out.z - e1), evaluate(norm, e1 - zero)};
    const std::array<double, 3> expected{std::sqrt(2.0), 1.0, 1.0};
    for (std::size_t k = 0; k < 3; ++k) {
        out.max_embedding_error = std::max(out.max_embedding_error, std::abs(out.embedded_distances[k] - expected[k]));
    }

    Vector mid(2);
    mid << 0.5, 0.0;
    const Vector join = out.z - mid;
    const double join_arg = std::atan2(std::abs(join[1]), join[0] * (join[1] < 0.0 ? -1.0 : 1.0));
    out.joining_vector_in_good_sector = !detail::in_bad_sector(join_arg, eps);
    out.required_distance = std::sqrt(1.25);
    out.midpoint_distance = evaluate(norm, join);
    out.gap = std::abs(out.midpoint_distance - out.required_distance);
    return out;
}

}  // namespace isom
