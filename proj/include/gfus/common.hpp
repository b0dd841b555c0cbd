#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gfus {

// Element index into a group's carrier. Orders are capped at 2^12, so 16 bits suffice.
using elt = std::uint16_t;

struct GroupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InconsistentPresentation : GroupError {
    using GroupError::GroupError;
};
struct UnsupportedOrder : GroupError {
    using GroupError::GroupError;
};
struct NotCentralInvolution : GroupError {
    using GroupError::GroupError;
};
struct NotNormal : GroupError {
    using GroupError::GroupError;
};
struct ParamOutOfRange : GroupError {
    using GroupError::GroupError;
};
struct ConstructionInvalid : GroupError {
    using GroupError::GroupError;
};
struct CapExceeded : GroupError {
    using GroupError::GroupError;
};
struct Singular : GroupError {
    using GroupError::GroupError;
};
struct NotCentralInF : GroupError {
    using GroupError::GroupError;
};

// Resource caps. Defaults follow the documented limits: group order 2^12,
// full automorphism enumeration 2^7 (2^8 opt-in), subgroup enumeration 2^6
// (2^7 opt-in), fusion enumeration 2^6.
struct Caps {
    long order = 1 << 12;
    long aut = 1 << 7;
    long subgroups = 1 << 6;
    long fusion = 1 << 6;
    long iso = 1 << 8;
    long budget = 50'000'000;  // node budget for backtracking searches

    static Caps defaults() { return Caps{}; }
};

}  // namespace gfus
