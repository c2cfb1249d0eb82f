#pragma once

#include "symchain/calculus.hpp"

#include <vector>

namespace symchain {

// target -> value. Targets are plain symbols or derivative atoms.
struct Binding {
    Atom target;
    Fraction value;
};

// Simultaneous substitution. Bindings are tried in order; the first whose
// target matches an atom wins. With `consequences`, a binding for a dependent
// u (or for D^beta f) also rewrites every jet u_gamma (D^gamma f, gamma >=
// beta) by the corresponding total derivative of its value in `space`.
// Values are themselves rewritten until no bound atom remains; a cycle raises
// SubstitutionCycleError. Closed-function arguments are substituted in place.
Fraction substitute(const Fraction& e, const std::vector<Binding>& bindings,
                    const VarSpace& space, bool consequences = true);
Fraction substitute(const Expr& e, const std::vector<Binding>& bindings,
                    const VarSpace& space, bool consequences = true);

} // namespace symchain
