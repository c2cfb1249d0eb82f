#pragma once

// Text front-end: the expression grammar and problem files.
//
// Expressions: + - * / ^ (integer exponents), integers, parentheses, declared
// names, jets with derivative suffixes (u_tx == u_xt), function application
// f(u), f_u(u), and the closed functions exp tan tanh coth sech csch.
//
// Problem files are line based; '#' starts a comment and a trailing '\'
// continues a line.
//
//   independent t, x
//   dependent u
//   parameter sigma
//   parameter r2 where r2^2 = 2
//   function f(u), g(u)
//   infinitesimals tau, xi ; eta
//   equation u_t = u_xx + u*(u-1)*(u-sigma)
//   rank t<x<u ; xi<eta<tau
//   extend xi_u, eta_v
//   candidate NAME [classical|nonclassical]
//     parameter c1
//     function b(t,x)
//     let sigma = 1/2
//     let f(u) = k*(u+A)^3
//     assume H != 0
//     xi = (3*u - sigma - 1)/r2
//     side b_t = b_xx - 2*b*b_x
//     siderank x<t ; b ; lex
//     expect D zero
//     discrepancy free text
//   end
//
// System files (for the chain command) declare `unknown xi(t,x,u)` and list
// `poly EXPR` lines instead of dependents and equations.

#include "symchain/harness.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace symchain {

struct Problem {
    PDESystem pde;
    std::optional<Rank> rank;
    std::vector<Candidate> candidates;
    std::vector<std::string> extend; // extension polynomials, in the nonclassical ring
    // System files.
    std::vector<FunctionRef> unknowns;
    std::vector<Expr> polys;

    bool is_system() const { return !unknowns.empty() || !polys.empty(); }
    const Candidate& candidate(const std::string& name) const; // UsageError if absent
    // The z-space of the problem (independents and dependents as plain
    // variables, parameters, opaque functions) and the system-file unknowns.
    VarSpace z_space() const;
    RingRef system_ring() const;
};

Fraction parse_expression(std::string_view text, const VarSpace& space);
Expr parse_polynomial(std::string_view text, const VarSpace& space);
Rank parse_rank(std::string_view text);

Problem parse_problem(std::string_view text);
Problem load_problem(const std::string& path);
std::string print_problem(const Problem& problem);

std::string to_string(const Expr& e);
std::string to_string(const Fraction& f);
std::string to_string(Atom a);

} // namespace symchain
