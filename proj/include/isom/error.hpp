#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace isom {

/// Failure categories surfaced by the library. The CLI reports them by name.
enum class ErrorKind {
    InvalidArgument,
    NotSquare,
    NonFinite,
    Asymmetric,
    NegativeDistance,
    NonzeroDiagonal,
    ZeroOffDiagonal,
    TriangleViolation,
    AlphaOutOfRange,
    DuplicatePoints,
    DegenerateImage,
    DimensionMismatch,
    DuplicateIndices,
    NotRealizable,
    IllConditioned,
    Infeasible,
    Degenerate,
    EpsOutOfRange,
    InvalidNorm,
    NotAffinelyIndependent,
    NotConcave,
    NormTooFar,
    EpsBoxEscape,
    QInvalid,
    SolverStalled,
    EpsExceedsMargin,
    RootFindFailed,
    NoValidAlpha,
    ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Asymmetric: return "Asymmetric";
    case ErrorKind::NegativeDistance: return "NegativeDistance";
    case ErrorKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorKind::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case ErrorKind::TriangleViolation: return "TriangleViolation";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::DegenerateImage: return "DegenerateImage";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DuplicateIndices: return "DuplicateIndices";
    case ErrorKind::NotRealizable: return "NotRealizable";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorKind::InvalidNorm: return "InvalidNorm";
    case ErrorKind::NotAffinelyIndependent: return "NotAffinelyIndependent";
    case ErrorKind::NotConcave: return "NotConcave";
    case ErrorKind::NormTooFar: return "NormTooFar";
    case ErrorKind::EpsBoxEscape: return "EpsBoxEscape";
    case ErrorKind::QInvalid: return "QInvalid";
    case ErrorKind::SolverStalled: return "SolverStalled";
    case ErrorKind::EpsExceedsMargin: return "EpsExceedsMargin";
    case ErrorKind::RootFindFailed: return "RootFindFailed";
    case ErrorKind::NoValidAlpha: return "NoValidAlpha";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::vector<std::size_t> indices = {})
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), indices_(std::move(indices)) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// Point indices the failure refers to (e.g. the offending triple), possibly empty.
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

private:
    ErrorKind kind_;
    std::vector<std::size_t> indices_;
};

}  // namespace isom
