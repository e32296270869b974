#ifndef LAGSURF_ERRORS_HPP
#define LAGSURF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lagsurf {

// Broad failure categories. The CLI maps these to process exit codes
// (validation -> 1, resolution -> 2, undefined invariant -> 3, io -> 4).
enum class ErrorCategory {
    Validation,
    Resolution,
    Undefined,
    Io,
    Internal,
};

enum class ErrorKind {
    // mesh
    NonManifold,
    NonOrientable,
    Disconnected,
    DegenerateFrame,
    ResolutionTooLow,
    // homology
    InternalRankError,
    MeshMismatch,
    NotIntegral,
    // winding
    EdgeAliasing,
    TriangleWrap,
    SingularMatrix,
    // forms
    DegenerateBlock,
    NotSPD,
    NondegeneracyFailure,
    InvalidFormField,
    // lambda
    WrongGenus,
    // suspension
    InconsistentPrismSplit,
    NotACycle,
    // classifier
    DegenerateTrivialization,
    NoRegularValue,
    RegularValueDisagreement,
    NotRegular,
    DegenerateImage,
    NotNullHomologous,
    BoundaryConditionViolated,
    InvalidSphereMap,
    // io
    IoError,
    SchemaError,
    // internal
    InternalError,
};

const char* error_kind_name(ErrorKind kind);
ErrorCategory error_category(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    ErrorCategory category() const { return error_category(kind_); }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace lagsurf

#endif
