#pragma once

#include <stdexcept>
#include <string>

namespace ssclust {

// Base class for every error raised by this library. `kind()` is a stable
// machine-readable tag used by the CLI's structured error output.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual ~Error() = default;
    virtual const char* kind() const noexcept { return "error"; }
};

#define SSCLUST_DEFINE_ERROR(Name, tag)                                    \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& msg) : Error(msg) {}              \
        const char* kind() const noexcept override { return tag; }         \
    }

// Mismatched sizes between arguments (vector lengths, matrix shapes).
SSCLUST_DEFINE_ERROR(DimensionError, "dimension");

// Argument outside the mathematical domain of an operation.
SSCLUST_DEFINE_ERROR(DomainError, "domain");

// A covariance is not positive definite even after regularization.
SSCLUST_DEFINE_ERROR(SingularModelError, "singular_model");

// A mixture component lost essentially all responsibility mass.
SSCLUST_DEFINE_ERROR(EmptyComponentError, "empty_component");

// Every component density underflowed for some observation.
SSCLUST_DEFINE_ERROR(NumericUnderflowError, "numeric_underflow");

// Criterion penalty is undefined (fewer than two unlabeled observations).
SSCLUST_DEFINE_ERROR(UndefinedPenaltyError, "undefined_penalty");

// Fewer observations than requested clusters.
SSCLUST_DEFINE_ERROR(InsufficientDataError, "insufficient_data");

// A permutation test was requested on degenerate input.
SSCLUST_DEFINE_ERROR(DegenerateTestError, "degenerate_test");

// Every candidate model failed to fit.
SSCLUST_DEFINE_ERROR(NoViableModelError, "no_viable_model");

// Malformed file content. Carries 1-based row/column when known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, long row = -1, long column = -1)
        : Error(msg), row(row), column(column) {}
    const char* kind() const noexcept override { return "parse"; }
    long row;
    long column;
};

// Required input missing or inconsistent with the request.
SSCLUST_DEFINE_ERROR(InputError, "input");

#undef SSCLUST_DEFINE_ERROR

}  // namespace ssclust
