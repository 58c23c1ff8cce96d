#include "ellcon/error.hpp"

namespace ellcon {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DivisionByZeroElement: return "DivisionByZeroElement";
        case ErrorCode::EvaluationAtPole: return "EvaluationAtPole";
        case ErrorCode::TruncationExceeded: return "TruncationExceeded";
        case ErrorCode::IllConditionedLeadingTerm: return "IllConditionedLeadingTerm";
        case ErrorCode::DegenerateCurve: return "DegenerateCurve";
        case ErrorCode::NewtonStall: return "NewtonStall";
        case ErrorCode::InvalidDivisor: return "InvalidDivisor";
        case ErrorCode::InvalidResidues: return "InvalidResidues";
        case ErrorCode::NotAConnection: return "NotAConnection";
        case ErrorCode::EigenvalueMismatch: return "EigenvalueMismatch";
        case ErrorCode::DegenerateResidue: return "DegenerateResidue";
        case ErrorCode::DiagonalPoint: return "DiagonalPoint";
        case ErrorCode::ChartBoundary: return "ChartBoundary";
        case ErrorCode::OddCardinality: return "OddCardinality";
        case ErrorCode::ExponentialBlowup: return "ExponentialBlowup";
        case ErrorCode::EvenN: return "EvenN";
        case ErrorCode::IntegerNu: return "IntegerNu";
        case ErrorCode::FuchsRelationViolated: return "FuchsRelationViolated";
        case ErrorCode::ChartMismatch: return "ChartMismatch";
        case ErrorCode::FDInconsistent: return "FDInconsistent";
        case ErrorCode::DegenerateMoebius: return "DegenerateMoebius";
        case ErrorCode::SampleAtPole: return "SampleAtPole";
        case ErrorCode::RankUnstable: return "RankUnstable";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
    }
    return "UnknownError";
}

}  // namespace ellcon
