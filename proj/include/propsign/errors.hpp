#pragma once

#include <stdexcept>
#include <string>

namespace propsign {

// Numerical result cannot be trusted: convergence check failed, truncation
// leaked, or an integrand stopped decaying.  Callers map this to exit code 2.
class accuracy_error : public std::runtime_error {
public:
    explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

// An integrand evaluated to a non-finite value; carries the offending node.
class evaluation_error : public std::runtime_error {
public:
    evaluation_error(const std::string& what, double node)
        : std::runtime_error(what + " at node " + std::to_string(node)), node_(node) {}
    double node() const { return node_; }

private:
    double node_;
};

// A parameter puts the computation outside its representable range
// (e.g. the inverse-map exponent overflow guard, divergent Laplace rates).
class range_error : public std::range_error {
public:
    explicit range_error(const std::string& what) : std::range_error(what) {}
};

// A channel admits no CPTP inverse on all states.
class not_invertible_error : public std::runtime_error {
public:
    explicit not_invertible_error(const std::string& what) : std::runtime_error(what) {}
};

// All witness cross terms vanish; the non-onto test cannot decide.
class witness_inconclusive_error : public std::runtime_error {
public:
    explicit witness_inconclusive_error(const std::string& what) : std::runtime_error(what) {}
};

// A result that should be internally consistent is not (e.g. a Kraus family
// passes proportionality but the extracted operator fails unitarity).
class internal_consistency_error : public std::logic_error {
public:
    explicit internal_consistency_error(const std::string& what) : std::logic_error(what) {}
};

// Malformed or physically invalid serialized input (files, JSON documents).
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace propsign
