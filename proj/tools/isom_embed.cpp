// isom_embed: command-line front end for the isom library.
//
// Exit codes: 0 success, 1 invalid input or a failed pipeline (a JSON error
// object is printed), 2 unparseable command line or input file.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isom/isom.hpp"

namespace {

using isom::io::json;

struct Globals {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out;
};

int emit(const Globals& g, const json& j) {
    const auto text = j.dump(2) + "\n";
    if (g.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(g.out);
        if (!f) {
            std::cerr << "cannot write " << g.out << "\n";
            return 1;
        }
        f << text;
    }
    return 0;
}

isom::EmbedOptions embed_options(const Globals& g, double tol, std::size_t max_iters, double eps_box, bool traces) {
    isom::EmbedOptions opts;
    opts.tol = tol;
    opts.solver.max_iters = max_iters;
    opts.solver.record_trace = traces;
    opts.probe.seed = g.seed;
    opts.probe.threads = g.threads;
    if (eps_box > 0.0) opts.eps_box = eps_box;
    return opts;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw isom::Error(isom::ErrorKind::ParseError, "bad grid value '" + tok + "'");
        }
    }
    return grid;
}

json check_report(const isom::MetricSpace& m) {
    const double margin = isom::concavity_margin(m);
    const auto eq = isom::is_equilateral(m);
    const auto cm = isom::sign_sequence_check(m);
    json j{{"n", m.size()},
           {"valid", true},
           {"diameter", m.diameter()},
           {"concavity_margin", isom::io::detail::number(margin)},
           {"concave", margin > 0.0},
           {"equilateral", eq ? json(*eq) : json(nullptr)},
           {"cm", isom::io::to_json(cm)},
           {"realizable", cm.signs_ok}};
    j["first_failure"] = cm.first_failure ? json(*cm.first_failure) : json(nullptr);
    return j;
}

isom::MetricSpace random_metric(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(1.0, 2.0);
    isom::Matrix d = isom::Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (Eigen::Index j = i + 1; j < d.cols(); ++j) d(i, j) = d(j, i) = u(rng);
    return isom::validate_metric(d);
}

json threshold_json(const isom::SnowflakeThreshold& t) {
    json checks = json::array();
    for (const auto& c : t.checks) {
        checks.push_back({{"alpha", c.alpha},
                          {"realizable", c.realizable},
                          {"max_deviation", c.max_deviation},
                          {"min_singular_value", c.min_singular_value}});
    }
    return json{{"alpha", t.alpha}, {"proximity_bound", t.proximity_bound}, {"checks", std::move(checks)}};
}

json demo_square(const Globals& g) {
    const auto sq = isom::square_example();
    isom::ProbeOptions opts;
    opts.seed = g.seed;
    json j{{"demo", "square"}, {"metric", isom::io::to_json(sq.metric)}, {"points", isom::io::to_json(sq.points)}};
    j["midpoints_of_0_3"] = isom::metric_midpoints(sq.metric, 0, 3);
    for (const auto& [name, z] : {std::pair{"l2", isom::NormSpec::lp(2.0, 2)}, std::pair{"l1", isom::NormSpec::lp(1.0, 2)}}) {
        const auto cert = isom::midpoint_obstruction(sq.metric, z);
        if (cert) {
            j["obstruction"][name] = {{"found", true},
                                      {"pair", {cert->i, cert->j}},
                                      {"midpoints", cert->midpoints},
                                      {"probe_margin", cert->probe_margin},
                                      {"pairs_checked", cert->pairs_checked}};
        } else {
            j["obstruction"][name] = {{"found", false}, {"result", "NoObstructionFound"}};
        }
    }
    return j;
}

json demo_sector(double eps) {
    const auto r = isom::sector_obstruction_demo(eps);
    return json{{"demo", "sector"},
                {"eps", r.eps},
                {"z", {r.z[0], r.z[1]}},
                {"z_argument", r.z_argument},
                {"z_in_bad_sector", r.z_in_bad_sector},
                {"embedded_distances", r.embedded_distances},
                {"max_embedding_error", r.max_embedding_error},
                {"required_distance", r.required_distance},
                {"midpoint_distance", r.midpoint_distance},
                {"gap", r.gap},
                {"obstruction", r.gap > 0.0}};
}

json demo_prop48(double eps) {
    json witnesses = json::array();
    for (double p : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        const auto w = isom::prop48_witness(eps, p);
        witnesses.push_back({{"p", p},
                             {"distortion", w.distortion},
                             {"midpoint_gap", w.midpoint_gap},
                             {"points", isom::io::to_json(w.points)}});
    }
    json near = json::array();
    for (int n : {1, 2, 4, 8, 16}) {
        const auto w = isom::near_isometric_witness(n);
        near.push_back({{"n", n}, {"p", w.p}, {"distortion", w.distortion}});
    }
    return json{{"demo", "prop48"},
                {"eps", eps},
                {"metric", isom::io::to_json(isom::prop48_metric(eps))},
                {"witnesses", std::move(witnesses)},
                {"near_isometric_square", std::move(near)}};
}

json demo_snowflake(const Globals& g) {
    const auto m = random_metric(g.seed, 5);
    json j{{"demo", "snowflake"}, {"seed", g.seed}, {"metric", isom::io::to_json(m)}};
    const std::vector<double> grid{0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
    double alpha = 0.3;
    try {
        const auto t = isom::snowflake_threshold(m, grid);
        j["threshold"] = threshold_json(t);
        alpha = std::min(alpha, t.alpha);
    } catch (const isom::Error& e) {
        j["threshold"] = isom::io::error_json(e);
    }
    const auto z = isom::NormSpec::lp(2.02, 4);
    isom::EmbedOptions opts;
    opts.probe.seed = g.seed;
    opts.probe.threads = g.threads;
    j["embedding_alpha"] = alpha;
    j["embedding"] = isom::io::to_json(isom::embed_snowflake(m, alpha, z, opts));
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isometric embeddings of finite metric spaces into finite-dimensional normed spaces"};
    app.require_subcommand(1);

    Globals g;
    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag, "Sampling seed (default 0, or $ISOM_EMBED_SEED)");
    app.add_option("--threads", g.threads, "Threads for norm sampling probes")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Write the JSON report to this file instead of stdout");

    std::string metric_file, norm_file, points_file;

    auto* check = app.add_subcommand("check", "Validate a metric and report concavity and Euclidean realizability");
    check->add_option("metric", metric_file, "Distance matrix (CSV or JSON)")->required();

    auto* realize = app.add_subcommand("realize", "Canonical Euclidean realization of a metric");
    realize->add_option("metric", metric_file, "Distance matrix (CSV or JSON)")->required();

    std::string mode = "ell2";
    double tol = 1e-9;
    std::size_t max_iters = 10000;
    double eps_box = 0.0;
    bool traces = false;
    auto* embed = app.add_subcommand("embed", "Isometric embedding into a norm close to l_2 or l_inf");
    embed->add_option("metric", metric_file, "Distance matrix (CSV or JSON)")->required();
    embed->add_option("norm", norm_file, "Norm specification (JSON)")->required();
    embed->add_option("--mode", mode, "ell2 (affinely independent input) or linf (concave input)")
        ->check(CLI::IsMember({"ell2", "linf"}));
    embed->add_option("--tol", tol, "Required max relative distance error");
    embed->add_option("--max-iters", max_iters, "Picard iteration budget per fixed-point solve");
    embed->add_option("--eps-box", eps_box, "Override the perturbation box width");
    embed->add_flag("--traces", traces, "Include per-iteration residuals in the report");

    auto* distortion = app.add_subcommand("distortion", "Distortion of an index-matched point set");
    distortion->add_option("metric", metric_file, "Distance matrix (CSV or JSON)")->required();
    distortion->add_option("points", points_file, "Points (CSV rows or JSON)")->required();
    distortion->add_option("norm", norm_file, "Norm specification (JSON)")->required();

    std::string grid_text = "0.9,0.8,0.7,0.6,0.5,0.4,0.3,0.2,0.1";
    double proximity = 0.0;
    double embed_alpha = 0.0;
    auto* flake = app.add_subcommand("snowflake", "Snowflake threshold search and embedding");
    flake->add_option("metric", metric_file, "Distance matrix (CSV or JSON)")->required();
    flake->add_option("--grid", grid_text, "Comma-separated alpha grid");
    flake->add_option("--proximity", proximity, "Proximity bound (default 1/(100 n))");
    flake->add_option("--norm", norm_file, "Target norm (JSON); default l_2^(n-1)");
    flake->add_option("--alpha", embed_alpha, "Embed at this alpha instead of the threshold");
    flake->add_option("--tol", tol, "Required max relative distance error");

    std::string demo_name;
    double demo_eps = 0.1;
    auto* demo = app.add_subcommand("demo", "Built-in reproductions: square, sector, prop48, snowflake");
    demo->add_option("name", demo_name, "Demo name")->required();
    demo->add_option("--eps", demo_eps, "Parameter for the sector and prop48 demos");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (seed_flag) {
        g.seed = *seed_flag;
    } else if (const char* env = std::getenv("ISOM_EMBED_SEED")) {
        try {
            g.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "ISOM_EMBED_SEED must be a nonnegative integer\n";
            return 2;
        }
    }

    try {
        if (*check) return emit(g, check_report(isom::io::load_metric(metric_file)));

        if (*realize) {
            const auto m = isom::io::load_metric(metric_file);
            return emit(g, isom::io::to_json(isom::realize_euclidean(m)));
        }

        if (*embed) {
            const auto m = isom::io::load_metric(metric_file);
            const auto z = isom::io::load_norm(norm_file);
            const auto opts = embed_options(g, tol, max_iters, eps_box, traces);
            const auto r = mode == "ell2" ? isom::embed_affinely_independent(m, z, opts) : isom::embed_concave(m, z, opts);
            const int rc = emit(g, isom::io::to_json(r, traces));
            return rc != 0 ? rc : (r.certified ? 0 : 1);
        }

        if (*distortion) {
            const auto m = isom::io::load_metric(metric_file);
            const auto pts = isom::io::parse_points(isom::io::read_file(points_file));
            const auto z = isom::io::load_norm(norm_file);
            const auto d = isom::correspondence_distortion(m, pts, z);
            return emit(g, json{{"r", d.r}, {"K", d.k}, {"isometry", d.k == 1.0 && d.r == 1.0}});
        }

        if (*flake) {
            const auto m = isom::io::load_metric(metric_file);
            std::optional<double> bound;
            if (proximity > 0.0) bound = proximity;
            const auto t = isom::snowflake_threshold(m, parse_grid(grid_text), bound);
            const double alpha = embed_alpha > 0.0 ? embed_alpha : t.alpha;
            const auto z = norm_file.empty() ? isom::NormSpec::lp(2.0, std::max<std::size_t>(1, m.size() - 1))
                                             : isom::io::load_norm(norm_file);
            const auto r = isom::embed_snowflake(m, alpha, z, embed_options(g, tol, 10000, 0.0, false));
            json j{{"threshold", threshold_json(t)},
                   {"embedding_alpha", alpha},
                   {"linear_independence_bound", isom::linear_independence_bound(m.size(), t.proximity_bound)},
                   {"embedding", isom::io::to_json(r)}};
            const int rc = emit(g, j);
            return rc != 0 ? rc : (r.certified ? 0 : 1);
        }

        if (*demo) {
            if (demo_name == "square") return emit(g, demo_square(g));
            if (demo_name == "sector") return emit(g, demo_sector(demo_eps));
            if (demo_name == "prop48") return emit(g, demo_prop48(demo_eps));
            if (demo_name == "snowflake") return emit(g, demo_snowflake(g));
            emit(g, json{{"error", "UnknownDemo"}, {"message", "unknown demo '" + demo_name + "'"}});
            return 1;
        }
    } catch (const isom::Error& e) {
        emit(g, isom::io::error_json(e));
        return e.kind() == isom::ErrorKind::ParseError ? 2 : 1;
    }
    return 1;
}
