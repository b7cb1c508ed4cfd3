#ifndef POLYVAR_ERRORS_HPP
#define POLYVAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polyvar {

/// Input violates a mathematical precondition (point outside a set, a
/// vector that is not a subgradient, mismatched dimensions, ...).
/// CLI maps these to exit code 2.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct DimMismatch : DomainError {
    explicit DimMismatch(const std::string& w) : DomainError(w) {}
};
struct NotMember : DomainError {
    explicit NotMember(const std::string& w) : DomainError(w) {}
};
struct NotInDomain : DomainError {
    explicit NotInDomain(const std::string& w) : DomainError(w) {}
};
struct NotSubgradient : DomainError {
    explicit NotSubgradient(const std::string& w) : DomainError(w) {}
};
struct NotSolution : DomainError {
    explicit NotSolution(const std::string& w) : DomainError(w) {}
};
struct NotKKTPoint : DomainError {
    explicit NotKKTPoint(const std::string& w) : DomainError(w) {}
};
struct NotSmoothHere : DomainError {
    explicit NotSmoothHere(const std::string& w) : DomainError(w) {}
};
struct NotAFacePair : DomainError {
    explicit NotAFacePair(const std::string& w) : DomainError(w) {}
};
struct OutOfRadius : DomainError {
    explicit OutOfRadius(const std::string& w) : DomainError(w) {}
};
struct DegenerateSolution : DomainError {
    explicit DegenerateSolution(const std::string& w) : DomainError(w) {}
};

/// An enumeration limit (dimension, constraint count, face count) was hit.
/// CLI maps these to exit code 3.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// A property the underlying theory guarantees failed to verify.
/// This always signals an implementation bug, never a math outcome.
/// CLI maps these to exit code 4.
class VerificationFailure : public std::runtime_error {
public:
    explicit VerificationFailure(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& w) : std::runtime_error(w) {}
};

}  // namespace polyvar

#endif
