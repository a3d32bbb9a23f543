#pragma once

#include <stdexcept>
#include <string>

namespace bpqn {

// A caller broke a documented precondition.
struct contract_violation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The requested object does not exist in the binary-addition model
// (a zero row would need an identity element, which the model lacks).
struct not_representable : std::domain_error {
    using std::domain_error::domain_error;
};

// Malformed SLP text. `line` is 1-based.
struct parse_error : std::runtime_error {
    parse_error(int line_, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line_) + ": " + reason), line(line_) {}
    int line;
};

// Circuit and matrix shapes disagree; distinct from a verification failure.
struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A cross-checked quantity came out inconsistent (synthesized vs. predicted
// gate count, bound ordering, ...).
struct bound_invariant_violation : std::logic_error {
    using std::logic_error::logic_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw contract_violation(what);
}

// Internal consistency checks that guard the synthesis step accounting.
inline void ensure(bool cond, const std::string& what) {
    if (!cond) throw std::logic_error("internal check failed: " + what);
}

}  // namespace detail

}  // namespace bpqn
