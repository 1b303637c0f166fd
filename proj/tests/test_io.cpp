#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "isom/isom.hpp"

using namespace isom;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(MetricIo, CsvRoundTripAtFullPrecision) {
    prop::Gen g(61);
    const auto m = g.metric(6);
    const auto back = io::parse_metric(io::to_csv(m.matrix()));
    EXPECT_EQ(back.matrix(), m.matrix());
}

TEST(MetricIo, CsvAcceptsWhitespaceCommentsAndBlankLines) {
    const auto m = io::parse_metric("# triangle\n0 1 1\n\n1 0 1\n1 1 0\n");
    EXPECT_EQ(m.size(), 3u);
    EXPECT_EQ(m(1, 2), 1.0);
}

TEST(MetricIo, JsonRoundTripWithLabels) {
    const auto m = validate_metric((Matrix(2, 2) << 0, 0.1, 0.1, 0).finished(), {"a", "b"});
    const auto back = io::parse_metric(io::to_json(m).dump());
    EXPECT_EQ(back.matrix(), m.matrix());
    EXPECT_EQ(back.labels(), m.labels());
}

TEST(MetricIo, ParseErrors) {
    EXPECT_EQ(kind_of([] { (void)io::parse_metric("0,1\n1,x\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { (void)io::parse_metric("0,1\n1\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { (void)io::parse_metric("{\"d\": [[0, 1], [1, 0]], \"n\": 3}"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { (void)io::parse_metric("{\"d\": "); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { (void)io::parse_metric(""); }), ErrorKind::ParseError);
}

TEST(MetricIo, AxiomFailuresKeepTheirKind) {
    EXPECT_EQ(kind_of([] { (void)io::parse_metric("0,1,3\n1,0,1\n3,1,0\n"); }), ErrorKind::TriangleViolation);
    EXPECT_EQ(kind_of([] { (void)io::parse_metric("0,1,2\n1,0,1\n"); }), ErrorKind::NotSquare);
}

TEST(NormIo, EveryVariantRoundTrips) {
    prop::Gen g(62);
    for (const auto& z : prop::sample_norms()) {
        const auto j = io::to_json(z);
        const auto back = io::norm_from_json(io::json::parse(j.dump()));
        EXPECT_EQ(back.dim(), z.dim());
        for (int k = 0; k < 20; ++k) {
            const Vector x = g.vector(z.dim());
            EXPECT_NEAR(evaluate(back, x), evaluate(z, x), 1e-14 * evaluate(z, x)) << j.dump();
        }
    }
}

TEST(NormIo, InfinityAndWeights) {
    const auto z = io::norm_from_json(io::json::parse(R"({"variant": "lp", "p": "inf", "dim": 2})"));
    EXPECT_EQ(evaluate(z, prop::vec({1, -3})), 3.0);
    EXPECT_EQ(io::to_json(z)["p"], "inf");
    const auto w = io::norm_from_json(io::json::parse(R"({"variant": "lp", "p": 2, "weights": [3, 4]})"));
    EXPECT_EQ(evaluate(w, prop::vec({1, 1})), 5.0);
    const auto r = io::norm_from_json(io::json::parse(R"({"variant": "curve", "radial": [1, 1, 1, 1]})"));
    EXPECT_NEAR(evaluate(r, prop::vec({1, 0})), 1.0, 1e-12);
}

TEST(NormIo, Errors) {
    using io::json;
    EXPECT_EQ(kind_of([] { (void)io::norm_from_json(json::parse(R"({"variant": "nope"})")); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { (void)io::norm_from_json(json::parse(R"({"variant": "lp", "p": 2})")); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { (void)io::norm_from_json(json::parse(R"({"variant": "lp", "p": 0.5, "dim": 2})")); }),
              ErrorKind::InvalidNorm);
    EXPECT_EQ(kind_of([] { (void)io::norm_from_json(json::parse("[1, 2]")); }), ErrorKind::ParseError);
}

TEST(PointIo, JsonAndCsv) {
    const auto a = io::parse_points(R"({"dim": 2, "points": [[0, 0], [1, 2]]})");
    EXPECT_EQ(a.size(), 2u);
    EXPECT_EQ(a[1][1], 2.0);
    const auto b = io::parse_points("0,0,1\n1,2,3\n");
    EXPECT_EQ(b.dim(), 3u);
    EXPECT_EQ(io::parse_points(io::to_json(b).dump())[1], b[1]);
}

TEST(ReportIo, EmbeddingResultShape) {
    Matrix d = Matrix::Ones(3, 3);
    d.diagonal().setZero();
    const auto r = embed_affinely_independent(validate_metric(d), NormSpec::lp(2.05, 2));
    const auto j = io::to_json(r);
    EXPECT_EQ(j["mode"], "ell2");
    EXPECT_EQ(j["points"].size(), 3u);
    EXPECT_TRUE(j["certificate"]["certified"].get<bool>());
    EXPECT_EQ(j["steps"].size(), 1u);
    EXPECT_FALSE(j["steps"][0].contains("trace"));
    EXPECT_TRUE(io::to_json(r, true)["steps"][0].contains("trace"));
}

TEST(ReportIo, ErrorObject) {
    const Error e(ErrorKind::TriangleViolation, "bad", {0, 1, 2});
    const auto j = io::error_json(e);
    EXPECT_EQ(j["error"], "TriangleViolation");
    EXPECT_EQ(j["indices"].size(), 3u);
}
