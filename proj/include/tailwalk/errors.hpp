#pragma once

#include <stdexcept>
#include <string>

namespace tailwalk {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes; callers that do not care can catch this type alone.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define TAILWALK_DEFINE_ERROR(Name)                    \
    class Name : public Error {                        \
    public:                                            \
        using Error::Error;                            \
    }

TAILWALK_DEFINE_ERROR(TailTooHeavy);
TAILWALK_DEFINE_ERROR(InvalidKernel);
TAILWALK_DEFINE_ERROR(MomentDiverges);
TAILWALK_DEFINE_ERROR(NoPowerTail);
TAILWALK_DEFINE_ERROR(GridTooSmall);
TAILWALK_DEFINE_ERROR(InvalidGrid);
TAILWALK_DEFINE_ERROR(DomainError);
TAILWALK_DEFINE_ERROR(OutsideValidityZone);
TAILWALK_DEFINE_ERROR(IntegrationBudgetExceeded);
TAILWALK_DEFINE_ERROR(InsufficientData);

#undef TAILWALK_DEFINE_ERROR

class QuadratureFailure : public Error {
public:
    QuadratureFailure(const std::string& what, double achieved)
        : Error(what + " (achieved tolerance " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Raised by validate_assumptions; `condition()` is the report key of the
/// first failed check (e.g. "subunit_char_fn").
class AssumptionViolated : public Error {
public:
    AssumptionViolated(const std::string& what, std::string condition)
        : Error(what), condition_(std::move(condition)) {}
    const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

/// Raised with a suggested torus side when the aliasing estimate exceeds the
/// requested tolerance.
class GridTooSmallSuggest : public GridTooSmall {
public:
    GridTooSmallSuggest(const std::string& what, long suggested)
        : GridTooSmall(what + " (suggested side " + std::to_string(suggested) + ")"),
          suggested_(suggested) {}
    long suggested_side() const noexcept { return suggested_; }

private:
    long suggested_;
};

}  // namespace tailwalk
