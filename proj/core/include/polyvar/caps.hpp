#ifndef POLYVAR_CAPS_HPP
#define POLYVAR_CAPS_HPP

#include <cstddef>

namespace polyvar {

/// Enumeration limits. Everything here is desk scale by design; the
/// combinatorial algorithms (double description, face lattices, active-set
/// enumeration) blow up beyond it and throw CapExceeded instead of
/// degrading silently.
struct Caps {
    std::size_t dd_dim = 8;
    std::size_t dd_constraints = 24;
    std::size_t face_halfspaces = 20;
    std::size_t prox_pattern_items = 20;  // pieces + constraints in the prox QP
};

}  // namespace polyvar

#endif
