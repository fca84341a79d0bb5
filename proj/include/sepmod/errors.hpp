#ifndef SEPMOD_ERRORS_HPP
#define SEPMOD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sepmod {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input (files, serialized payloads).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Two internal computations of the same fact disagreed beyond tolerance.
/// Indicates a numerically pathological input or a bug, never a normal outcome.
class InternalInconsistencyError : public Error {
public:
    using Error::Error;
};

class NonFiniteEntryError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class ShapeMismatchError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotAProjectionError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotAnIdempotentError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotSeparatedError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// The product norm that must stay below one (for the resolvent-style
/// idempotent construction) reached or exceeded one.
class NormNotLessThanOneError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class LambdaZeroError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// The two idempotents fail to annihilate each other (Pi1*Pi2 or Pi2*Pi1 != 0).
class AnnihilationFailureError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotAStateError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class BlockMismatchError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// A subspace that must be invariant under the right algebra action is not.
class NotInvariantError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotConcordantError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// The vector handed to the separating-state search already lies in the
/// submodule, so no state can separate it.
class VectorInSubmoduleError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

} // namespace sepmod

#endif // SEPMOD_ERRORS_HPP
