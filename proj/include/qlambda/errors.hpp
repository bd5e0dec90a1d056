#pragma once

#include <stdexcept>
#include <string>

namespace qlambda {

// Resource-budget failures. The computation is well posed but exceeded a
// configured bound; callers may retry with a larger budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FactorizationTooLarge : ResourceError {
    using ResourceError::ResourceError;
};

struct SearchBoundExceeded : ResourceError {
    using ResourceError::ResourceError;
};

struct PrecisionExhausted : ResourceError {
    using ResourceError::ResourceError;
};

struct SizeUnsupported : ResourceError {
    using ResourceError::ResourceError;
};

// Mathematical-domain failures. The input is syntactically fine but the
// requested operation does not apply to it.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : DomainError {
    using DomainError::DomainError;
};

struct DisallowedKind : DomainError {
    using DomainError::DomainError;
};

// Signals caller misuse of generator_of_power (exponent not a multiple of
// the ideal class order); never a modeled mathematical outcome.
struct NotPrincipal : DomainError {
    using DomainError::DomainError;
};

struct NotApplicable : DomainError {
    using DomainError::DomainError;
};

struct InapplicableCongruence : DomainError {
    using DomainError::DomainError;
};

}  // namespace qlambda
