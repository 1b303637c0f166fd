#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isom/fixed_point.hpp"
#include "isom/metric.hpp"
#include "isom/norm.hpp"
#include "isom/norm_probes.hpp"
#include "isom/types.hpp"

namespace isom {

/// Options shared by the fixed-point embedding drivers.
struct EmbedOptions {
    double tol = 1e-9;  // required max relative distance error of the image
    FixedPointOptions solver{};
    ProbeOptions probe{};
    /// Rescale Z when sampling shows the majorization hypothesis failing.
    bool auto_normalize = true;
    /// Box half-width override for the perturbation parameters; chosen automatically when absent.
    std::optional<double> eps_box;
    /// Absolute slack (relative to the step's distance scale) for the box inequalities.
    double box_slack = 1e-9;
};

/// Embedding image plus its isometry certificate.
struct EmbeddingResult {
    PointConfig image;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    double tol = 0.0;
    bool certified = false;
    std::vector<FixedPointReport> reports;  // one per fixed-point solve
    NormSpec norm;                          // the norm the image is certified in (after rescaling)
    double norm_scale = 1.0;                // norm = norm_scale * (input norm)
    double delta = 0.0;                     // sampled equivalence gap used by the box checks
    std::string mode;
};

struct Certificate {
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
};

/// Largest absolute and relative deviation of ||f_i - f_j||_Z from d(i,j).
inline Certificate certify(const MetricSpace& m, const PointConfig& image, const NormSpec& z) {
    Certificate c;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            const double err = std::abs(evaluate_padded(z, image[i] - image[j]) - m(i, j));
            c.max_abs_err = std::max(c.max_abs_err, err);
            c.max_rel_err = std::max(c.max_rel_err, err / m(i, j));
        }
    return c;
}

namespace detail {

struct Normalization {
    NormSpec norm;
    double scale = 1.0;
    double delta = 0.0;
};

/// Rescales z so that ||x||_z <= ||x||_ref on the sampled sphere of the first
/// `subspace` coordinates and measures delta = max ||x||_ref / ||x||_z - 1.
inline Normalization normalize_against(const NormSpec& z, const NormSpec& reference, std::size_t subspace,
                                       const EmbedOptions& opts) {
    ProbeOptions probe = opts.probe;
    probe.subspace_dim = subspace == z.dim() ? 0 : subspace;
    double lo = 1.0;
    double hi = 1.0;
    if (subspace == 1) {
        lo = hi = evaluate_padded(z, Vector::Ones(1)) / evaluate_padded(reference, Vector::Ones(1));
    } else {
        const auto est = equivalence_constants(reference, z, probe);  // ratio ||x||_z / ||x||_ref
        lo = est.c_lo;
        hi = est.c_hi;
    }
    Normalization out{z, 1.0, 0.0};
    if (hi > 1.0 + 1e-12) {
        if (!opts.auto_normalize) {
            throw Error(ErrorKind::NormTooFar, "norm is not majorized by the reference norm on sampled directions");
        }
        out.scale = 1.0 / hi;
        out.norm = NormSpec::scaled(z, out.scale);
    }
    out.delta = std::max(0.0, 1.0 / (lo * out.scale) - 1.0);
    return out;
}

}  // namespace detail

}  // namespace isom
