#ifndef TORSIONLAB_ERRORS_HPP
#define TORSIONLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace torsionlab {

// Error taxonomy. Precondition violations map onto std::invalid_argument /
// std::domain_error; runtime numerical failures get their own types so that
// callers (and the CLI exit-code logic) can tell them apart.

struct NotConvexError : std::invalid_argument {
    explicit NotConvexError(const std::string& what) : std::invalid_argument(what) {}
};

struct MeshingFailure : std::runtime_error {
    explicit MeshingFailure(const std::string& what) : std::runtime_error(what) {}
};

struct SolverFailure : std::runtime_error {
    explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

struct IntegrationFailure : std::runtime_error {
    explicit IntegrationFailure(const std::string& what) : std::runtime_error(what) {}
};

struct SearchFailure : std::runtime_error {
    explicit SearchFailure(const std::string& what) : std::runtime_error(what) {}
};

struct FitFailure : std::runtime_error {
    explicit FitFailure(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfDomainError : std::domain_error {
    explicit OutOfDomainError(const std::string& what) : std::domain_error(what) {}
};

} // namespace torsionlab

#endif
