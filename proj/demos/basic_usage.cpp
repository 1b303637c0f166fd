// Walks through the main entry points on small inputs.

#include <cstdio>

#include "isom/isom.hpp"

int main() {
    using namespace isom;

    Matrix d(4, 4);
    // clang-format off
    d << 0.0, 1.0, 1.2, 1.4,
         1.0, 0.0, 1.1, 1.3,
         1.2, 1.1, 0.0, 1.0,
         1.4, 1.3, 1.0, 0.0;
    // clang-format on
    const auto m = validate_metric(d, {"a", "b", "c", "d"});

    const auto cm = sign_sequence_check(m);
    std::printf("Euclidean-realizable: %s, concavity margin %.4f\n", cm.signs_ok ? "yes" : "no", concavity_margin(m));

    const auto near_l2 = NormSpec::scaled(NormSpec::lp(2.05, 3), 0.98);
    const auto ell2 = embed_affinely_independent(m, near_l2);
    std::printf("into scaled l_2.05^3: max relative error %.2e (%s)\n", ell2.max_rel_err,
                ell2.certified ? "certified" : "not certified");
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto& p = ell2.image[i];
        std::printf("  %s -> (% .6f, % .6f, % .6f)\n", m.labels()[i].c_str(), p[0], p[1], p[2]);
    }

    const auto near_linf = NormSpec::lp(60.0, 4);
    const auto linf = embed_concave(m, near_linf);
    std::printf("into l_60^4: max relative error %.2e (%s)\n", linf.max_rel_err,
                linf.certified ? "certified" : "not certified");

    const auto sq = square_example();
    const auto obstruction = midpoint_obstruction(sq.metric, NormSpec::lp(2.0, 2));
    if (obstruction) {
        std::printf("square in l_2^2: points %zu and %zu have %zu midpoints, so no isometric embedding\n",
                    obstruction->i, obstruction->j, obstruction->midpoints.size());
    }
    for (int n : {1, 4, 16}) {
        std::printf("square into l_p^2, p = 1 + 1/%d: distortion %.6f\n", n, near_isometric_witness(n).distortion);
    }
    return 0;
}
