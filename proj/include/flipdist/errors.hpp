#pragma once

#include <stdexcept>
#include <string>

namespace flipdist {

// Bad input: malformed documents, graphs violating the structural
// requirements (loops, multi-edges, not 2-connected, Euler check, ...).
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed input that a specific operation cannot accept: alpha mismatch,
// infeasible out-degree sums, non-strongly-connected orientations, flipping
// a face that is not flippable, and so on.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// A broken internal invariant. Seeing one of these means the library itself
// (or a structure handed between its modules) is corrupt, not the user input.
struct invariant_error : std::logic_error {
    explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw invariant_error(what);
}

}  // namespace flipdist
