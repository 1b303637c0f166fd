#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "isom/isom.hpp"

using namespace isom;
using prop::vec;

namespace {

MetricSpace equilateral(std::size_t n, double side = 1.0) {
    Matrix d = Matrix::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), side);
    d.diagonal().setZero();
    return validate_metric(d);
}

MetricSpace unit_square_l2() {
    PointConfig pts(2, {vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1})});
    return distance_matrix_of(pts, NormSpec::lp(2.0, 2));
}

// Oracle: cofactor expansion of the bordered matrix, independent of the LU path.
double det_by_expansion(const Matrix& a) {
    const auto n = a.rows();
    if (n == 1) return a(0, 0);
    double sum = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
        Matrix minor(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r) {
            Eigen::Index cc = 0;
            for (Eigen::Index k = 0; k < n; ++k)
                if (k != c) minor(r - 1, cc++) = a(r, k);
        }
        sum += ((c % 2) ? -1.0 : 1.0) * a(0, c) * det_by_expansion(minor);
    }
    return sum;
}

double cm_oracle(const MetricSpace& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Matrix b = Matrix::Ones(n + 1, n + 1);
    b(n, n) = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) b(i, j) = std::pow(m.matrix()(i, j), 2);
    return det_by_expansion(b);
}

}  // namespace

TEST(CmDet, SpecValues) {
    EXPECT_NEAR(cm_det(equilateral(2), {0, 1}), 2.0, 1e-12 * 2.0);
    EXPECT_NEAR(cm_det(equilateral(3), {0, 1, 2}), -3.0, 1e-12 * 3.0);
    EXPECT_NEAR(cm_det(unit_square_l2(), {0, 1, 2, 3}), 0.0, 1e-12);
    EXPECT_NEAR(cm_oracle(unit_square_l2()), 0.0, 1e-12);
}

TEST(CmDet, MatchesCofactorOracleOnRandomSpaces) {
    prop::Gen g(21);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = g.metric(g.index(2, 6));
        std::vector<std::size_t> idx(m.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        const double want = cm_oracle(m);
        EXPECT_NEAR(cm_det(m, idx), want, 1e-10 * std::max(1.0, std::abs(want)));
    }
}

TEST(CmDet, PropertyPermutationInvariant) {
    prop::Gen g(22);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = g.metric(5);
        std::vector<std::size_t> idx{0, 1, 2, 3, 4};
        const double base = cm_det(m, idx);
        std::shuffle(idx.begin(), idx.end(), g.engine());
        EXPECT_NEAR(cm_det(m, idx), base, 1e-10 * std::max(1.0, std::abs(base)));
    }
}

TEST(CmDet, RejectsDuplicateIndices) {
    try {
        (void)cm_det(equilateral(3), {0, 1, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DuplicateIndices);
    }
}

TEST(SignSequence, EquilateralTriangle) {
    const auto r = sign_sequence_check(equilateral(3));
    ASSERT_EQ(r.dets.size(), 2u);
    EXPECT_NEAR(r.dets[0], 2.0, 1e-12);
    EXPECT_NEAR(r.dets[1], -3.0, 1e-12);
    EXPECT_TRUE(r.signs_ok);
    EXPECT_FALSE(r.first_failure);
}

TEST(SignSequence, SquareFailsAtLastPoint) {
    const auto r = sign_sequence_check(unit_square_l2());
    EXPECT_EQ(r.dets.size(), 3u);
    EXPECT_FALSE(r.signs_ok);
    ASSERT_TRUE(r.first_failure);
    EXPECT_EQ(*r.first_failure, 3u);
}

TEST(SignSequence, CollinearTripleFails) {
    PointConfig pts(1, {vec({0}), vec({1}), vec({2.5})});
    const auto r = sign_sequence_check(distance_matrix_of(pts, NormSpec::lp(2.0, 1)));
    EXPECT_FALSE(r.signs_ok);
    EXPECT_EQ(*r.first_failure, 2u);
}

TEST(SignSequence, NonEuclideanMetricFails) {
    // the l_1 square: (1,0) and (0,1) both midpoints of the diagonal
    EXPECT_FALSE(sign_sequence_check(square_example().metric).signs_ok);
}

TEST(SignSequence, PropertyAcceptsRandomSimplices) {
    prop::Gen g(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = g.simplex(g.index(2, 8));
        const auto m = distance_matrix_of(pts, NormSpec::lp(2.0, pts.dim()));
        EXPECT_TRUE(sign_sequence_check(m).signs_ok);
        std::vector<std::size_t> order(m.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), g.engine());
        EXPECT_TRUE(sign_sequence_check(m, order).signs_ok);
    }
}

TEST(SignSequence, PropertyRejectsAffineCombinations) {
    prop::Gen g(24);
    for (int trial = 0; trial < 50; ++trial) {
        auto pts = g.simplex(g.index(3, 6));
        PointConfig lifted(pts.dim() + 1);
        for (const auto& p : pts.points()) {
            Vector q = Vector::Zero(p.size() + 1);
            q.head(p.size()) = p;
            lifted.push_back(q);
        }
        const double w = g.uniform(0.2, 0.8);
        lifted.push_back(w * lifted[0] + (1 - w) * lifted[1] + Vector::Unit(lifted.dim(), 0) * 0.0);
        const auto m = distance_matrix_of(lifted, NormSpec::lp(2.0, lifted.dim()));
        EXPECT_FALSE(sign_sequence_check(m).signs_ok);
    }
}

TEST(SignSequence, RejectsNonPermutation) {
    EXPECT_THROW((void)sign_sequence_check(equilateral(3), {0, 0, 1}), Error);
}

TEST(AppendPoint, SpecExamples) {
    PointConfig seg(1, {vec({0}), vec({1})});
    const auto x = append_point(seg, std::vector<double>{1.0, 1.0});
    EXPECT_NEAR(x[0], 0.5, 1e-15);
    EXPECT_NEAR(x[1], std::sqrt(3.0) / 2, 1e-15);

    PointConfig origin(0, {Vector::Zero(0)});
    const auto r = append_point(origin, std::vector<double>{2.5});
    ASSERT_EQ(r.size(), 1);
    EXPECT_EQ(r[0], 2.5);

    PointConfig tri(2, {vec({0, 0}), vec({1, 0}), vec({0.5, std::sqrt(3.0) / 2})});
    const auto apex = append_point(tri, std::vector<double>{1.0, 1.0, 1.0});
    EXPECT_NEAR(apex[0], 0.5, 1e-15);
    EXPECT_NEAR(apex[1], std::sqrt(3.0) / 6, 1e-15);
    EXPECT_NEAR(apex[2], std::sqrt(6.0) / 3, 1e-15);
}

TEST(AppendPoint, InfeasibleAndDegenerate) {
    PointConfig seg(1, {vec({0}), vec({1})});
    try {
        (void)append_point(seg, std::vector<double>{0.2, 0.2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    }
    PointConfig flat(2, {vec({0, 0}), vec({1, 0}), vec({2, 0})});
    try {
        (void)append_point(flat, std::vector<double>{1.0, 1.0, 1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
    }
}

TEST(AppendPoint, PropertyPositiveLastCoordinateAndExactDistances) {
    prop::Gen g(25);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = g.simplex(g.index(3, 7));
        const auto canon = realize_euclidean(distance_matrix_of(pts, NormSpec::lp(2.0, pts.dim())));
        const auto k = canon.size() - 1;
        PointConfig base(k - 1);
        for (std::size_t i = 0; i < k; ++i) base.push_back(canon[i].head(static_cast<Eigen::Index>(k - 1)));
        std::vector<double> t(k);
        for (std::size_t i = 0; i < k; ++i) t[i] = (canon[i] - canon[k]).norm();
        const auto x = append_point(base, t);
        EXPECT_GT(x[x.size() - 1], 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            Vector b = Vector::Zero(x.size());
            b.head(base[i].size()) = base[i];
            EXPECT_NEAR((x - b).norm(), t[i], 1e-12 * t[i]);
        }
    }
}

TEST(RealizeEuclidean, SpecExamples) {
    const auto two = realize_euclidean(equilateral(2));
    EXPECT_EQ(two[0], vec({0}));
    EXPECT_EQ(two[1], vec({1}));
    const auto tri = realize_euclidean(equilateral(3));
    EXPECT_NEAR((tri[0] - vec({0, 0})).norm(), 0.0, 1e-15);
    EXPECT_NEAR((tri[1] - vec({1, 0})).norm(), 0.0, 1e-15);
    EXPECT_NEAR((tri[2] - vec({0.5, std::sqrt(3.0) / 2})).norm(), 0.0, 1e-15);
}

TEST(RealizeEuclidean, RejectsNonRealizable) {
    try {
        (void)realize_euclidean(unit_square_l2());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotRealizable);
        EXPECT_EQ(e.indices(), std::vector<std::size_t>{3});
    }
}

TEST(RealizeEuclidean, PropertyRoundTripAndCanonicalForm) {
    prop::Gen g(26);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = g.simplex(g.index(2, 8));
        const auto m = distance_matrix_of(pts, NormSpec::lp(2.0, pts.dim()));
        const auto q = realize_euclidean(m);
        ASSERT_EQ(q.dim(), m.size() - 1);
        for (std::size_t i = 0; i < q.size(); ++i) {
            for (auto c = static_cast<Eigen::Index>(i); c < q[i].size(); ++c) EXPECT_EQ(q[i][c], 0.0);
            if (i > 0) {
                EXPECT_GT(q[i][static_cast<Eigen::Index>(i) - 1], 0.0);
            }
        }
        const auto back = distance_matrix_of(q, NormSpec::lp(2.0, q.dim()));
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j) EXPECT_NEAR(back(i, j), m(i, j), 1e-9 * m(i, j));
        // canonical configurations are fixed points of the round trip
        const auto again = realize_euclidean(back);
        for (std::size_t i = 0; i < q.size(); ++i) EXPECT_LE((again[i] - q[i]).norm(), 1e-9 * m.diameter());
    }
}
