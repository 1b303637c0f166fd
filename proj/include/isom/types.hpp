#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "isom/error.hpp"

namespace isom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// An ordered list of points in R^dim. Embedding images and Euclidean
/// realizations are both carried in this form.
class PointConfig {
public:
    PointConfig() = default;

    explicit PointConfig(std::size_t dim) : dim_(dim) {}

    PointConfig(std::size_t dim, std::vector<Vector> points) : dim_(dim), points_(std::move(points)) {
        for (const auto& p : points_) check_dim(p);
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    const Vector& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Vector>& points() const noexcept { return points_; }

    void push_back(Vector p) {
        check_dim(p);
        points_.push_back(std::move(p));
    }

    /// Copy with every point zero-padded (or truncated) to `dim` coordinates.
    /// Truncation requires the dropped coordinates to be zero.
    PointConfig resized(std::size_t dim) const {
        PointConfig out(dim);
        for (const auto& p : points_) {
            Vector q = Vector::Zero(static_cast<Eigen::Index>(dim));
            const auto keep = std::min<Eigen::Index>(p.size(), q.size());
            q.head(keep) = p.head(keep);
            for (Eigen::Index i = keep; i < p.size(); ++i) {
                if (p[i] != 0.0) {
                    throw Error(ErrorKind::DimensionMismatch, "cannot truncate a point with nonzero trailing coordinates");
                }
            }
            out.points_.push_back(std::move(q));
        }
        return out;
    }

private:
    void check_dim(const Vector& p) const {
        if (static_cast<std::size_t>(p.size()) != dim_) {
            throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(p.size()) +
                                                          " coordinates, configuration dimension is " +
                                                          std::to_string(dim_));
        }
    }

    std::size_t dim_ = 0;
    std::vector<Vector> points_;
};

}  // namespace isom
