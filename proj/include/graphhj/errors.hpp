#pragma once

#include <stdexcept>
#include <string>

namespace graphhj {

/// Every failure the library can signal, grouped by how the CLI maps it
/// to an exit code: input/validation errors (2), solver failures (3),
/// internal invariant breaches (4).
enum class Errc {
    // validation / parsing
    LoopEdge,
    ParallelEdges,
    Disconnected,
    NonpositiveLength,
    MissingOrNonpositiveBeta,
    BoundaryDataOnTransitionVertex,
    DuplicateId,
    UnknownId,
    NoBoundaryVertex,
    DanglingTransitionVertex,
    NotTransitionVertex,
    ResolutionTooCoarse,
    CoefficientSignViolation,
    NonpositiveDensity,
    OutOfRange,
    TooLarge,
    StepTooLarge,
    BadArgument,
    ParseError,
    // solver
    SingularSystem,
    JacobianSingular,
    PositivityLost,
    SolveFailed,
    // internal
    CertificateFailed,
    ConstructionFailed,
    InternalInvariant,
};

enum class ErrorClass { Validation, Solver, Internal };

constexpr ErrorClass classify(Errc c) {
    switch (c) {
        case Errc::SingularSystem:
        case Errc::JacobianSingular:
        case Errc::PositivityLost:
        case Errc::SolveFailed:
            return ErrorClass::Solver;
        case Errc::CertificateFailed:
        case Errc::ConstructionFailed:
        case Errc::InternalInvariant:
            return ErrorClass::Internal;
        default:
            return ErrorClass::Validation;
    }
}

/// CLI exit code contract: 0 ok, 2 validation/parse, 3 solver, 4 internal.
constexpr int exit_code(Errc c) {
    switch (classify(c)) {
        case ErrorClass::Validation: return 2;
        case ErrorClass::Solver: return 3;
        case ErrorClass::Internal: return 4;
    }
    return 4;
}

constexpr const char* to_string(Errc c) {
    switch (c) {
        case Errc::LoopEdge: return "LoopEdge";
        case Errc::ParallelEdges: return "ParallelEdges";
        case Errc::Disconnected: return "Disconnected";
        case Errc::NonpositiveLength: return "NonpositiveLength";
        case Errc::MissingOrNonpositiveBeta: return "MissingOrNonpositiveBeta";
        case Errc::BoundaryDataOnTransitionVertex: return "BoundaryDataOnTransitionVertex";
        case Errc::DuplicateId: return "DuplicateId";
        case Errc::UnknownId: return "UnknownId";
        case Errc::NoBoundaryVertex: return "NoBoundaryVertex";
        case Errc::DanglingTransitionVertex: return "DanglingTransitionVertex";
        case Errc::NotTransitionVertex: return "NotTransitionVertex";
        case Errc::ResolutionTooCoarse: return "ResolutionTooCoarse";
        case Errc::CoefficientSignViolation: return "CoefficientSignViolation";
        case Errc::NonpositiveDensity: return "NonpositiveDensity";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::TooLarge: return "TooLarge";
        case Errc::StepTooLarge: return "StepTooLarge";
        case Errc::BadArgument: return "BadArgument";
        case Errc::ParseError: return "ParseError";
        case Errc::SingularSystem: return "SingularSystem";
        case Errc::JacobianSingular: return "JacobianSingular";
        case Errc::PositivityLost: return "PositivityLost";
        case Errc::SolveFailed: return "SolveFailed";
        case Errc::CertificateFailed: return "CertificateFailed";
        case Errc::ConstructionFailed: return "ConstructionFailed";
        case Errc::InternalInvariant: return "InternalInvariant";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }
    int exit_code() const noexcept { return graphhj::exit_code(code_); }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace graphhj
