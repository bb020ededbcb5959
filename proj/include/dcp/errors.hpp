#pragma once

// Error types thrown by the library. All derive from std::runtime_error /
// std::invalid_argument so callers can catch coarsely or precisely.

#include <stdexcept>
#include <string>

namespace dcp {

// A lattice coordinate outside the geometry.
struct CoordinateError : std::invalid_argument {
    explicit CoordinateError(const std::string& what) : std::invalid_argument(what) {}
};

// Operation applied to a site in the wrong occupancy state.
struct StateError : std::logic_error {
    explicit StateError(const std::string& what) : std::logic_error(what) {}
};

// Birth between non-adjacent sites.
struct TopologyError : std::invalid_argument {
    explicit TopologyError(const std::string& what) : std::invalid_argument(what) {}
};

// Parameter outside its stated domain.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Coupling preconditions (lambda1 <= lambda2, a1 v 0 <= a2) violated.
struct ParameterOrderError : std::invalid_argument {
    explicit ParameterOrderError(const std::string& what) : std::invalid_argument(what) {}
};

// step() called with total rate zero.
struct AbsorbingStateError : std::runtime_error {
    explicit AbsorbingStateError(const std::string& what) : std::runtime_error(what) {}
};

// Requested output not available for this configuration (e.g. raster with d != 2).
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dcp
