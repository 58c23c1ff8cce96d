#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ellcon {

enum class ErrorCode {
    DivisionByZeroElement,
    EvaluationAtPole,
    TruncationExceeded,
    IllConditionedLeadingTerm,
    DegenerateCurve,
    NewtonStall,
    InvalidDivisor,
    InvalidResidues,
    NotAConnection,
    EigenvalueMismatch,
    DegenerateResidue,
    DiagonalPoint,
    ChartBoundary,
    OddCardinality,
    ExponentialBlowup,
    EvenN,
    IntegerNu,
    FuchsRelationViolated,
    ChartMismatch,
    FDInconsistent,
    DegenerateMoebius,
    SampleAtPole,
    RankUnstable,
    ParseError,
    ValidationError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code logic) can dispatch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ellcon
