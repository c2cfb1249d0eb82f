#pragma once

#include "symchain/fraction.hpp"
#include "symchain/varspace.hpp"

#include <functional>
#include <map>
#include <vector>

namespace symchain {

// Extends a rule on atoms to a derivation on polynomials (Leibniz rule).
// The rule is evaluated once per distinct atom.
Expr apply_derivation(const Expr& e, const std::function<Expr(Atom)>& rule);
Fraction apply_derivation(const Fraction& f, const std::function<Expr(Atom)>& rule);

// Total derivative D_x in `space`: Deriv atoms follow the chain rule over their
// arguments, closed functions follow their derivative rule.
Expr total_derivative(const Expr& e, SymId x, const VarSpace& space);
Fraction total_derivative(const Fraction& f, SymId x, const VarSpace& space);
// D^alpha with alpha aligned with space.independents().
Expr total_derivative(const Expr& e, const std::vector<std::uint16_t>& alpha,
                      const VarSpace& space);
Fraction total_derivative(const Fraction& f, const std::vector<std::uint16_t>& alpha,
                          const VarSpace& space);

// Partial derivative treating every jet as an independent coordinate. For a
// plain symbol `wrt`, unknown and opaque functions taking it as an argument
// contribute their partial derivative.
Expr partial_derivative(const Expr& e, Atom wrt);

// Coefficients of `e` viewed as a polynomial in the atoms accepted by `is_var`
// (closed functions count as variables when accepted). Sorted by monomial.
std::vector<std::pair<Monomial, Expr>> collect_coefficients(
    const Expr& e, const std::function<bool(Atom)>& is_var);

} // namespace symchain
