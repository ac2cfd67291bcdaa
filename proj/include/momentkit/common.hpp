///
/// \file common.hpp
///
/// Error type and tolerance settings shared by every momentkit module.
///
#ifndef MOMENTKIT_COMMON_HPP
#define MOMENTKIT_COMMON_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace momentkit
{

enum class ErrorKind
{
    NoSolution,
    NonRealSolution,
    SingularReducedSystem,
    NoPositiveBranches,
    FamilyOverflow,
    RepeatedRoots,
    DimensionMismatch,
    RankDeficientSignal,
    IllConditionedNodes,
    MalformedInput,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
        case ErrorKind::NoSolution:
            return "NoSolution";
        case ErrorKind::NonRealSolution:
            return "NonRealSolution";
        case ErrorKind::SingularReducedSystem:
            return "SingularReducedSystem";
        case ErrorKind::NoPositiveBranches:
            return "NoPositiveBranches";
        case ErrorKind::FamilyOverflow:
            return "FamilyOverflow";
        case ErrorKind::RepeatedRoots:
            return "RepeatedRoots";
        case ErrorKind::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorKind::RankDeficientSignal:
            return "RankDeficientSignal";
        case ErrorKind::IllConditionedNodes:
            return "IllConditionedNodes";
        case ErrorKind::MalformedInput:
            return "MalformedInput";
    }
    return "Unknown";
}

///
/// Exception carrying a machine-readable kind. All recoverable failures of the
/// library are reported through this type.
///
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(detail), m_kind(kind)
    {
    }

    ErrorKind kind() const noexcept
    {
        return m_kind;
    }

private:
    ErrorKind m_kind;
};

///
/// Numerical thresholds.
///
/// `rank` is relative to the largest singular value of the Hankel block the
/// decision is made on. `zero` is absolute; when unset it defaults to
/// `1e-8 * (1 + max|a_k|)` for the coefficient sequence being inverted.
/// `imag` bounds `|Im z| / (1 + |Re z|)` for a root to count as real.
///
struct Tolerances
{
    double rank = 1e-9;
    std::optional<double> zero;
    double imag = 1e-8;
};

} // namespace momentkit

#endif /* MOMENTKIT_COMMON_HPP */
