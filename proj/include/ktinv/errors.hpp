#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ktinv {

enum class ErrorKind {
    ZeroTensor,
    DomainError,
    SingularPoint,
    LengthMismatch,
    NoFoci,
    NotCanonizable,
    BackendUnavailable,
    ValidationFailed,
    SamplingExhausted,
    NotCompatible,
    PathThroughSingularity,
};

std::string_view to_string(ErrorKind kind);

// Every library failure is reported through this type; `kind()` lets callers
// (the CLI in particular) map failures to exit codes without string matching.
class KtError : public std::runtime_error {
public:
    KtError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw KtError(kind, what); }

}  // namespace ktinv
