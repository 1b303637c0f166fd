#include <cmath>

#include <gtest/gtest.h>

#include "isom/isom.hpp"

using namespace isom;

TEST(FixedPoint, ContractionConvergesWithPicard) {
    // x = cos(x) componentwise
    auto phi = [](const Vector& x) { return Vector(x.array().cos()); };
    const auto sol = solve_fixed_point(phi, Vector::Zero(3), 1.0, {});
    EXPECT_TRUE(sol.report.converged);
    EXPECT_EQ(sol.report.method, "picard");
    for (double v : sol.x) EXPECT_NEAR(v, 0.7390851332151607, 1e-11);
    EXPECT_LE(sol.report.final_residual, 1e-12);
    EXPECT_EQ(sol.report.trace.size(), sol.report.iterations + 1);
}

TEST(FixedPoint, ExpansiveMapFallsBackToBroyden) {
    // x = 3x - 2 has the repelling fixed point 1; damped Picard diverges until
    // lambda is tiny, so a small iteration budget forces the fallback.
    auto phi = [](const Vector& x) { return Vector(3.0 * x.array() - 2.0); };
    FixedPointOptions opts;
    opts.max_iters = 5;
    const auto sol = solve_fixed_point(phi, Vector::Constant(2, 0.5), 1.0, opts, -10.0, 10.0);
    EXPECT_EQ(sol.report.method, "broyden");
    EXPECT_TRUE(sol.report.converged);
    EXPECT_NEAR(sol.x[0], 1.0, 1e-12);
}

TEST(FixedPoint, ReportsNonConvergenceWithoutThrowing) {
    auto phi = [](const Vector& x) { return Vector(x.array() + 1.0); };
    FixedPointOptions opts;
    opts.max_iters = 20;
    opts.broyden_iters = 5;
    const auto sol = solve_fixed_point(phi, Vector::Zero(1), 1.0, opts, 0.0, 1.0);
    EXPECT_FALSE(sol.report.converged);
    EXPECT_GT(sol.report.final_residual, 1e-12);
}

TEST(FixedPoint, ConvergedImpliesResidualBelowTolerance) {
    for (double scale : {1e-3, 1.0, 1e3}) {
        auto phi = [scale](const Vector& x) { return Vector(0.5 * x.array() + scale); };
        const auto sol = solve_fixed_point(phi, Vector::Zero(2), scale, {});
        ASSERT_TRUE(sol.report.converged);
        EXPECT_LE(sol.report.final_residual, 1e-12 * scale);
        EXPECT_NEAR(sol.x[0], 2.0 * scale, 1e-10 * scale);
    }
}

TEST(FixedPoint, PropagatesExceptionsFromPhi) {
    auto phi = [](const Vector&) -> Vector { throw Error(ErrorKind::EpsBoxEscape, "out"); };
    EXPECT_THROW((void)solve_fixed_point(phi, Vector::Zero(1), 1.0, {}), Error);
}
