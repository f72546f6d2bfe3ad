#pragma once

#include <stdexcept>
#include <string>

namespace superint {

// Every failure the library reports derives from Error; the kind lets the CLI
// map it onto an exit status without string matching.
enum class ErrorKind {
    Domain,
    Branch,
    Convergence,
    Realness,
    NotEigenvalue,
    Labeling,
    Accuracy,
    Degeneracy,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define SUPERINT_ERROR_TYPE(Name, Kind)                                              \
    class Name : public Error {                                                      \
    public:                                                                          \
        explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {}     \
    };

SUPERINT_ERROR_TYPE(DomainError, Domain)
SUPERINT_ERROR_TYPE(BranchError, Branch)
SUPERINT_ERROR_TYPE(ConvergenceError, Convergence)
SUPERINT_ERROR_TYPE(RealnessError, Realness)
SUPERINT_ERROR_TYPE(NotEigenvalueError, NotEigenvalue)
SUPERINT_ERROR_TYPE(LabelingError, Labeling)
SUPERINT_ERROR_TYPE(AccuracyError, Accuracy)
SUPERINT_ERROR_TYPE(DegeneracyError, Degeneracy)
SUPERINT_ERROR_TYPE(IoError, Io)

#undef SUPERINT_ERROR_TYPE

}  // namespace superint
