#pragma once

#include <stdexcept>
#include <string>

namespace hfib {

/// Malformed call: out-of-range indices, mismatched truncations, wrong codomains.
class InvalidArgument : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data violates a structural identity (simplicial identities, dd = 0, ...).
class CorruptInput : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The requested answer depends on simplices above the stored truncation.
class IncompleteAtTruncation : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A derived construction broke one of its own invariants (e.g. an action
/// category that fails the category axioms because the action is broken).
class ContractViolation : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A shortcut was requested whose hypothesis could not be certified.
class PreconditionUnverified : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Hypotheses of a conditional statement fail; carries a witness description.
class HypothesesNotMet : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// No certified way to compute the requested object.
class UnsupportedOracle : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hfib
