#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "isom/isom.hpp"

using namespace isom;

namespace {

MetricSpace line(std::initializer_list<double> xs) {
    PointConfig pts(1);
    for (double x : xs) pts.push_back(Vector::Constant(1, x));
    return distance_matrix_of(pts, NormSpec::lp(2.0, 1));
}

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

ErrorKind kind_of(const Matrix& m) {
    try {
        (void)validate_metric(m);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected validate_metric to throw";
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(ValidateMetric, AcceptsTwoPointSpace) {
    const auto m = validate_metric(mat({{0, 1}, {1, 0}}));
    EXPECT_EQ(m.size(), 2u);
    EXPECT_EQ(m(0, 1), 1.0);
}

TEST(ValidateMetric, ReportsTriangleViolationWithTriple) {
    try {
        (void)validate_metric(mat({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TriangleViolation);
        ASSERT_EQ(e.indices().size(), 3u);
        std::vector<std::size_t> idx = e.indices();
        std::sort(idx.begin(), idx.end());
        EXPECT_EQ(idx, (std::vector<std::size_t>{0, 1, 2}));
    }
}

TEST(ValidateMetric, AcceptsFourPointUniformConvexityMetric) {
    EXPECT_NO_THROW((void)validate_metric(
        mat({{0, 1, 1, 1}, {1, 0, 0.5, 1}, {1, 0.5, 0, 0.5}, {1, 1, 0.5, 0}})));
}

TEST(ValidateMetric, RejectsEachAxiomFailure) {
    EXPECT_EQ(kind_of(mat({{0, 1}, {2, 0}})), ErrorKind::Asymmetric);
    EXPECT_EQ(kind_of(mat({{0, -1}, {-1, 0}})), ErrorKind::NegativeDistance);
    EXPECT_EQ(kind_of(mat({{0, 0}, {0, 0}})), ErrorKind::ZeroOffDiagonal);
    EXPECT_EQ(kind_of(mat({{1, 1}, {1, 0}})), ErrorKind::NonzeroDiagonal);
    EXPECT_EQ(kind_of(Matrix::Zero(2, 3)), ErrorKind::NotSquare);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_EQ(kind_of(mat({{0, nan}, {nan, 0}})), ErrorKind::NonFinite);
}

TEST(ValidateMetric, OnePointSpaceIsValid) {
    EXPECT_EQ(validate_metric(Matrix::Zero(1, 1)).size(), 1u);
}

TEST(ConcavityMargin, EquilateralTriangle) {
    EXPECT_DOUBLE_EQ(concavity_margin(validate_metric(mat({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}))), 0.5);
}

TEST(ConcavityMargin, CollinearTripleIsZero) { EXPECT_EQ(concavity_margin(line({0, 1, 2})), 0.0); }

TEST(ConcavityMargin, HalfSnowflakeOfCollinearTriple) {
    const auto s = snowflake(line({0, 1, 2}), 0.5);
    // oracle: brute force over ordered triples
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 3; ++y)
            for (std::size_t z = 0; z < 3; ++z)
                if (x != y && y != z && x != z) best = std::min(best, (s(x, y) + s(y, z) - s(x, z)) / 2.0);
    EXPECT_NEAR(concavity_margin(s), best, 1e-15);
    EXPECT_NEAR(concavity_margin(s), (2.0 - std::sqrt(2.0)) / 2.0, 1e-15);
}

TEST(ConcavityMargin, SmallSpacesAreVacuouslyConcave) {
    EXPECT_TRUE(std::isinf(concavity_margin(line({0, 1}))));
    EXPECT_TRUE(std::isinf(concavity_margin(line({0}))));
}

TEST(Snowflake, AlphaOneIsIdentity) {
    const auto m = line({0, 1, 3});
    EXPECT_EQ(snowflake(m, 1.0).matrix(), m.matrix());
}

TEST(Snowflake, HalfOfCollinearTriple) {
    const auto s = snowflake(line({0, 1, 2}), 0.5);
    EXPECT_DOUBLE_EQ(s(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(s(1, 2), 1.0);
    EXPECT_DOUBLE_EQ(s(0, 2), std::sqrt(2.0));
}

TEST(Snowflake, RejectsAlphaOutsideUnitInterval) {
    const auto m = line({0, 1});
    for (double a : {0.0, -0.5, 1.5}) {
        try {
            (void)snowflake(m, a);
            FAIL() << a;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::AlphaOutOfRange);
        }
    }
}

TEST(Snowflake, PropertyAlwaysAMetricAndStrictlyConcave) {
    prop::Gen g(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = g.path_metric(g.index(3, 7));
        const double alpha = g.uniform(0.05, 0.999);
        const auto s = snowflake(m, alpha);
        EXPECT_NO_THROW((void)validate_metric(s.matrix()));
        EXPECT_GT(concavity_margin(s), 0.0);
    }
}

TEST(IsEquilateral, Cases) {
    const auto tri = validate_metric(mat({{0, 2, 2}, {2, 0, 2}, {2, 2, 0}}));
    ASSERT_TRUE(is_equilateral(tri));
    EXPECT_EQ(*is_equilateral(tri), 2.0);
    EXPECT_FALSE(is_equilateral(line({0, 1, 3})));
    EXPECT_FALSE(is_equilateral(line({0})));
}

TEST(MetricMidpoints, SquareInL1HasTwoMidpoints) {
    const auto sq = square_example();
    EXPECT_EQ(metric_midpoints(sq.metric, 0, 3), (std::vector<std::size_t>{1, 2}));
}

TEST(MetricMidpoints, LineAndEquilateral) {
    EXPECT_EQ(metric_midpoints(line({0, 0.5, 1}), 0, 2), (std::vector<std::size_t>{1}));
    const auto tri = validate_metric(mat({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) {
                EXPECT_TRUE(metric_midpoints(tri, i, j).empty());
            }
}

TEST(MetricMidpoints, PropertySymmetricInEndpoints) {
    prop::Gen g(3);
    for (int trial = 0; trial < 100; ++trial) {
        PointConfig pts(1);
        const auto n = g.index(3, 8);
        for (std::size_t k = 0; k < n; ++k) pts.push_back(Vector::Constant(1, static_cast<double>(g.index(0, 40)) / 4.0));
        std::vector<double> seen;
        PointConfig uniq(1);
        for (const auto& p : pts.points()) {
            if (std::find(seen.begin(), seen.end(), p[0]) == seen.end()) {
                seen.push_back(p[0]);
                uniq.push_back(p);
            }
        }
        if (uniq.size() < 2) continue;
        const auto m = distance_matrix_of(uniq, NormSpec::lp(1.0, 1));
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j) EXPECT_EQ(metric_midpoints(m, i, j), metric_midpoints(m, j, i));
    }
}

TEST(DistanceMatrixOf, UnitSquareUnderL2) {
    PointConfig pts(2, {prop::vec({0, 0}), prop::vec({1, 0}), prop::vec({1, 1}), prop::vec({0, 1})});
    const auto m = distance_matrix_of(pts, NormSpec::lp(2.0, 2));
    EXPECT_DOUBLE_EQ(m(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(m(1, 2), 1.0);
    EXPECT_DOUBLE_EQ(m(2, 3), 1.0);
    EXPECT_DOUBLE_EQ(m(0, 3), 1.0);
    EXPECT_DOUBLE_EQ(m(0, 2), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(m(1, 3), std::sqrt(2.0));
}

TEST(DistanceMatrixOf, SinglePointAndDuplicates) {
    PointConfig one(2, {prop::vec({3, 4})});
    EXPECT_EQ(distance_matrix_of(one, NormSpec::lp(2.0, 2)).matrix(), Matrix::Zero(1, 1));
    PointConfig dup(2, {prop::vec({1, 1}), prop::vec({1, 1})});
    try {
        (void)distance_matrix_of(dup, NormSpec::lp(2.0, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DuplicatePoints);
    }
}

TEST(CorrespondenceDistortion, IsometryHasKOne) {
    prop::Gen g(5);
    const auto pts = g.simplex(5);
    const auto z = NormSpec::lp(2.0, pts.dim());
    const auto d = correspondence_distortion(distance_matrix_of(pts, z), pts, z);
    EXPECT_NEAR(d.k, 1.0, 1e-15);
    EXPECT_NEAR(d.r, 1.0, 1e-15);
}

TEST(CorrespondenceDistortion, SquareInL1AgainstEuclideanMetric) {
    PointConfig pts(2, {prop::vec({0, 0}), prop::vec({1, 0}), prop::vec({1, 1}), prop::vec({0, 1})});
    const auto m = distance_matrix_of(pts, NormSpec::lp(2.0, 2));
    const auto d = correspondence_distortion(m, pts, NormSpec::lp(1.0, 2));
    EXPECT_NEAR(d.k, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(d.r, 1.0, 1e-15);
}

TEST(CorrespondenceDistortion, PropertyKAtLeastOneAndScaleInvariant) {
    prop::Gen g(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = g.index(2, 6);
        const auto m = g.metric(n);
        PointConfig pts(3);
        for (std::size_t i = 0; i < n; ++i) pts.push_back(g.vector(3));
        const auto z = NormSpec::lp(g.uniform(1.0, 4.0), 3);
        const auto d = correspondence_distortion(m, pts, z);
        EXPECT_GE(d.k, 1.0);
        // a scaled isometry has K = 1
        const double s = g.uniform(0.1, 10.0);
        const auto iso = correspondence_distortion(distance_matrix_of(pts, z).scaled(s), pts, z);
        EXPECT_NEAR(iso.k, 1.0, 1e-13);
        EXPECT_NEAR(iso.r, 1.0 / s, 1e-13 / s);
    }
}

TEST(CorrespondenceDistortion, DegenerateImage) {
    PointConfig pts(2, {prop::vec({0, 0}), prop::vec({0, 0})});
    try {
        (void)correspondence_distortion(line({0, 1}), pts, NormSpec::lp(2.0, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateImage);
    }
}

TEST(PointConfig, RejectsMixedDimensions) {
    PointConfig pts(2);
    EXPECT_THROW(pts.push_back(Vector::Zero(3)), Error);
}
