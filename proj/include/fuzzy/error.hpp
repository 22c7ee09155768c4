#pragma once

#include <stdexcept>
#include <string>

namespace fuzzy {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (t <= 0, point not
/// in the universe, rational outside [0,1], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Exact arithmetic left the representable range.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// The operation is not defined for this t-norm or space.
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A bounded search over parameters came back empty. Inconclusive, never a
/// proof of non-existence.
class SearchFailure : public Error {
public:
    using Error::Error;
};

class CertificationError : public Error {
public:
    using Error::Error;
};

/// A parameter derivation needed a modulus entry that was not supplied.
class DerivationError : public Error {
public:
    using Error::Error;
};

class NonArchimedeanViolation : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace fuzzy
