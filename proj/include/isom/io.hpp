#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "isom/cayley_menger.hpp"
#include "isom/embedding.hpp"
#include "isom/error.hpp"
#include "isom/metric.hpp"
#include "isom/norm.hpp"
#include "isom/types.hpp"

namespace isom::io {

using nlohmann::json;

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view tok, std::size_t line) {
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": '" + std::string(tok) + "' is not a number");
    }
    return v;
}

inline Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw Error(ErrorKind::ParseError, "no rows");
    const auto cols = rows.front().size();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw Error(ErrorKind::ParseError, "row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                                                   " entries, expected " + std::to_string(cols));
        }
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

inline json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double number_from(const json& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
    }
    throw Error(ErrorKind::ParseError, std::string(what) + " must be a number or \"inf\"");
}

}  // namespace detail

/// Rows of comma- or whitespace-separated numbers, no header. Blank lines and
/// lines starting with '#' are skipped.
inline Matrix parse_csv_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::vector<double> row;
        std::string_view rest = t;
        const bool commas = rest.find(',') != std::string_view::npos;
        while (!rest.empty()) {
            std::size_t cut = 0;
            if (commas) {
                cut = rest.find(',');
            } else {
                cut = 0;
                while (cut < rest.size() && !std::isspace(static_cast<unsigned char>(rest[cut]))) ++cut;
                if (cut == rest.size()) cut = std::string_view::npos;
            }
            row.push_back(detail::parse_double(rest.substr(0, cut), lineno));
            if (cut == std::string_view::npos) break;
            rest = commas ? rest.substr(cut + 1) : detail::trim(rest.substr(cut));
        }
        rows.push_back(std::move(row));
    }
    return detail::rows_to_matrix(rows);
}

inline std::string to_csv(const Matrix& m) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
        out << '\n';
    }
    return out.str();
}

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
    }
}

// ---- metric spaces -------------------------------------------------------

inline json to_json(const MetricSpace& m) {
    json d = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        d.push_back(std::move(row));
    }
    json out{{"n", m.size()}, {"d", std::move(d)}};
    if (!m.labels().empty()) out["labels"] = m.labels();
    return out;
}

/// {"n": int, "d": [[...]], "labels": [...]} with n and labels optional.
/// The matrix is returned unvalidated.
inline Matrix metric_matrix_from_json(const json& j, std::vector<std::string>* labels = nullptr) {
    try {
        if (!j.is_object() || !j.contains("d")) throw Error(ErrorKind::ParseError, "metric JSON needs a \"d\" field");
        const auto rows = j.at("d").get<std::vector<std::vector<double>>>();
        Matrix m = detail::rows_to_matrix(rows);
        if (j.contains("n") && j.at("n").get<std::size_t>() != static_cast<std::size_t>(m.rows())) {
            throw Error(ErrorKind::ParseError, "\"n\" disagrees with the number of rows of \"d\"");
        }
        if (labels && j.contains("labels")) *labels = j.at("labels").get<std::vector<std::string>>();
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("malformed metric JSON: ") + e.what());
    }
}

inline bool looks_like_json(const std::string& text) {
    const auto t = detail::trim(text);
    return !t.empty() && (t.front() == '{' || t.front() == '[');
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Parses a metric from CSV or JSON text (JSON detected by its first character)
/// and validates it. Syntax problems raise ParseError; axiom failures raise
/// the corresponding validate_metric kind.
inline MetricSpace parse_metric(const std::string& text) {
    std::vector<std::string> labels;
    const Matrix m = looks_like_json(text) ? metric_matrix_from_json(parse_json_text(text), &labels)
                                           : parse_csv_matrix(text);
    return validate_metric(m, std::move(labels));
}

inline MetricSpace load_metric(const std::string& path) { return parse_metric(read_file(path)); }

// ---- point configurations ------------------------------------------------

inline json to_json(const PointConfig& pts) {
    json arr = json::array();
    for (const auto& p : pts.points()) arr.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    return json{{"dim", pts.dim()}, {"points", std::move(arr)}};
}

/// {"dim": d, "points": [[...]]} or CSV rows.
inline PointConfig parse_points(const std::string& text) {
    Matrix m;
    if (looks_like_json(text)) {
        try {
            const auto j = parse_json_text(text);
            const auto rows = j.is_array() ? j.get<std::vector<std::vector<double>>>()
                                           : j.at("points").get<std::vector<std::vector<double>>>();
            m = detail::rows_to_matrix(rows);
            if (j.is_object() && j.contains("dim") && j.at("dim").get<std::size_t>() != static_cast<std::size_t>(m.cols())) {
                throw Error(ErrorKind::ParseError, "\"dim\" disagrees with the point length");
            }
        } catch (const json::exception& e) {
            throw Error(ErrorKind::ParseError, std::string("malformed points JSON: ") + e.what());
        }
    } else {
        m = parse_csv_matrix(text);
    }
    PointConfig out(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const Vector row = m.row(i).transpose();
        if (!row.allFinite()) throw Error(ErrorKind::NonFinite, "point coordinates must be finite");
        out.push_back(row);
    }
    return out;
}

// ---- norms ---------------------------------------------------------------

namespace detail {

struct NormJsonWriter {
    json operator()(const LpNorm& n) const {
        json out{{"variant", "lp"}, {"p", number(n.p)}, {"dim", n.dim}};
        if (!n.weights.empty()) out["weights"] = n.weights;
        return out;
    }
    json operator()(const CurveNorm& n) const {
        json v = json::array();
        for (const auto& p : n.vertices) v.push_back({p.x(), p.y()});
        return json{{"variant", "curve"}, {"vertices", std::move(v)}};
    }
    json operator()(const SectorNorm& n) const { return json{{"variant", "sector"}, {"eps", n.eps}}; }
    json operator()(const DirectSumNorm& n) const;
    json operator()(const ScaledNorm& n) const;
};

}  // namespace detail

inline json to_json(const NormSpec& z) { return std::visit(detail::NormJsonWriter{}, z.variant()); }

inline json detail::NormJsonWriter::operator()(const DirectSumNorm& n) const {
    json blocks = json::array();
    for (const auto& b : n.blocks) blocks.push_back(to_json(b));
    return json{{"variant", "direct_sum"}, {"outer_p", number(n.outer_p)}, {"blocks", std::move(blocks)}};
}

inline json detail::NormJsonWriter::operator()(const ScaledNorm& n) const {
    return json{{"variant", "scaled"}, {"c", n.c}, {"inner", to_json(*n.inner)}};
}

/// Builds a NormSpec from its JSON description:
///   {"variant": "lp", "p": 2 | "inf", "dim": 3, "weights": [...]}
///   {"variant": "curve", "vertices": [[x, y], ...]} or {"variant": "curve", "radial": [...]}
///   {"variant": "sector", "eps": 0.1}
///   {"variant": "direct_sum", "outer_p": 2, "blocks": [...]}
///   {"variant": "scaled", "c": 0.5, "inner": {...}}
inline NormSpec norm_from_json(const json& j) {
    try {
        if (!j.is_object()) throw Error(ErrorKind::ParseError, "norm must be a JSON object");
        const auto variant = j.at("variant").get<std::string>();
        if (variant == "lp") {
            const double p = detail::number_from(j.at("p"), "p");
            if (j.contains("weights")) {
                auto w = j.at("weights").get<std::vector<double>>();
                if (j.contains("dim") && j.at("dim").get<std::size_t>() != w.size()) {
                    throw Error(ErrorKind::ParseError, "\"dim\" disagrees with the number of weights");
                }
                return NormSpec::weighted_lp(p, std::move(w));
            }
            return NormSpec::lp(p, j.at("dim").get<std::size_t>());
        }
        if (variant == "curve") {
            if (j.contains("radial")) return NormSpec::curve_from_radial(j.at("radial").get<std::vector<double>>());
            std::vector<Eigen::Vector2d> verts;
            for (const auto& v : j.at("vertices")) {
                const auto xy = v.get<std::vector<double>>();
                if (xy.size() != 2) throw Error(ErrorKind::ParseError, "curve vertices must be [x, y] pairs");
                verts.emplace_back(xy[0], xy[1]);
            }
            return NormSpec::curve(std::move(verts));
        }
        if (variant == "sector") return NormSpec::sector(j.at("eps").get<double>());
        if (variant == "direct_sum") {
            std::vector<NormSpec> blocks;
            for (const auto& b : j.at("blocks")) blocks.push_back(norm_from_json(b));
            return NormSpec::direct_sum(detail::number_from(j.at("outer_p"), "outer_p"), std::move(blocks));
        }
        if (variant == "scaled") return NormSpec::scaled(norm_from_json(j.at("inner")), j.at("c").get<double>());
        throw Error(ErrorKind::ParseError, "unknown norm variant '" + variant + "'");
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("malformed norm JSON: ") + e.what());
    }
}

inline NormSpec load_norm(const std::string& path) { return norm_from_json(parse_json_text(read_file(path))); }

// ---- reports -------------------------------------------------------------

inline json to_json(const FixedPointReport& r) {
    json out{{"iterations", r.iterations},
             {"final_residual", detail::number(r.final_residual)},
             {"converged", r.converged},
             {"eps_box", r.eps_box},
             {"method", r.method},
             {"min_phi", detail::number(r.min_phi)},
             {"max_upper_ratio", r.max_upper_ratio}};
    if (!r.trace.empty()) out["trace"] = r.trace;
    return out;
}

inline json to_json(const EmbeddingResult& r, bool include_traces = false) {
    json steps = json::array();
    for (const auto& s : r.reports) {
        json js = to_json(s);
        if (!include_traces) js.erase("trace");
        steps.push_back(std::move(js));
    }
    json pts = json::array();
    for (const auto& p : r.image.points()) pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    return json{{"mode", r.mode},
                {"dim", r.image.dim()},
                {"points", std::move(pts)},
                {"certificate",
                 {{"max_abs_err", r.max_abs_err},
                  {"max_rel_err", r.max_rel_err},
                  {"tol", r.tol},
                  {"certified", r.certified}}},
                {"norm", to_json(r.norm)},
                {"norm_scale", r.norm_scale},
                {"delta", r.delta},
                {"steps", std::move(steps)}};
}

inline json to_json(const CmReport& r) {
    json out{{"dets", r.dets}, {"signs_ok", r.signs_ok}, {"ordering", r.ordering}};
    out["first_failure"] = r.first_failure ? json(*r.first_failure) : json(nullptr);
    return out;
}

inline json error_json(const Error& e) {
    json out{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    if (!e.indices().empty()) out["indices"] = e.indices();
    return out;
}

}  // namespace isom::io
