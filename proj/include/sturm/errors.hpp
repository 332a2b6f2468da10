#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sturm {

/// Failure categories shared by every module. The CLI maps them onto exit codes.
enum class ErrorKind {
    DimensionMismatch,
    NonFinite,
    NotHermitian,
    NotPositiveDefinite,
    ConvergenceFailure,
    DegenerateSpectrum,
    SingularEigenbasis,
    SingularMatrix,
    ComplexSpectrum,
    SingularWeight,
    NonpositiveWeight,
    NonMonotoneMap,
    GridTooSmall,
    ConditioningFailure,
};

inline constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::SingularEigenbasis: return "SingularEigenbasis";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorKind::SingularWeight: return "SingularWeight";
    case ErrorKind::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorKind::NonMonotoneMap: return "NonMonotoneMap";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::ConditioningFailure: return "ConditioningFailure";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// True for errors that signal the input lies outside the numerically tractable
/// regime, as opposed to malformed input.
inline constexpr bool is_numerical(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ConvergenceFailure:
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::SingularEigenbasis:
    case ErrorKind::SingularMatrix:
    case ErrorKind::ComplexSpectrum:
    case ErrorKind::SingularWeight:
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::NotHermitian:
    case ErrorKind::ConditioningFailure:
        return true;
    default:
        return false;
    }
}

}  // namespace sturm
