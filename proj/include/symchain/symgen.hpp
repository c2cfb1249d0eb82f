#pragma once

// Determining systems of classical and nonclassical symmetries for PDE systems
// in solved form.

#include "symchain/diffalg.hpp"
#include "symchain/substitute.hpp"

#include <map>
#include <string>
#include <vector>

namespace symchain {

struct PdeEquation {
    Atom pivot; // a jet of a dependent, e.g. u_t
    Expr rhs;
};

struct PDESystem {
    // Independents, dependents, parameters and opaque data functions.
    VarSpace space;
    std::vector<PdeEquation> equations;
    // Infinitesimal names, one per independent then one per dependent
    // (e.g. tau, xi, eta). Empty: defaults from default_infinitesimals().
    std::vector<std::string> infinitesimals;

    unsigned order() const;
    Expr residual(std::size_t i) const { return Expr(equations[i].pivot) - equations[i].rhs; }
    std::vector<std::string> infinitesimal_names() const;
};

// tau, xi for two independents, xi1..xip otherwise; eta, phi, psi, chi for
// up to four dependents, eta1..etaq otherwise.
std::vector<std::string> default_infinitesimals(std::size_t p, std::size_t q);

enum class GeneratorKind { Classical, Nonclassical };

// Classical unknowns carry this suffix (tau -> taup), standing for the primed
// coordinates of the classical generator.
inline constexpr const char* kClassicalSuffix = "p";

struct Generator {
    GeneratorKind kind;
    std::vector<Expr> xi;  // per independent; nonclassical xi[0] == 1
    std::vector<Expr> eta; // per dependent
    std::vector<FunctionRef> unknowns;
};

// The infinitesimal generator over z = (independents, dependents).
Generator make_generator(const PDESystem& pde, GeneratorKind kind);

// The jet space of the PDE extended by the generator's unknowns.
VarSpace jet_space(const PDESystem& pde, const Generator& gen);

// Coefficients eta^J of d/du^a_J for the given jets (dependent jets only).
std::map<Atom, Expr> prolong(const PDESystem& pde, const Generator& gen,
                             const std::vector<Atom>& jets);

// Pr X applied to e.
Expr apply_prolongation(const Expr& e, const PDESystem& pde, const Generator& gen);

struct DeterminingPoly {
    Expr body;
    std::size_t equation; // which PDE produced it
    Monomial jets;        // the parametric jet monomial it is the coefficient of
    // Classical systems are autoreduced; a member that is not itself a
    // collected coefficient points at the coefficient sharing its leader.
    bool reduced = false;
};

struct DeterminingSystem {
    GeneratorKind kind;
    RingRef ring; // z-space with the unknowns, under the requested rank
    Generator generator;
    std::vector<DeterminingPoly> polys;
    std::vector<DeterminingPoly> raw;  // coefficients before autoreduction
    std::vector<Binding> eliminations; // the jet bindings used on-shell

    std::vector<Expr> bodies() const;
};

// z = (independents, dependents) as plain variables, with the parameters and
// opaque functions of the PDE.
VarSpace z_space(const PDESystem& pde);

// `rank` orders z and names the unknowns with their nonclassical names
// (t<x<u ; xi<eta<tau). The classical ring uses the suffixed names.
RingRef determining_ring(const PDESystem& pde, const Rank& rank, GeneratorKind kind);

// The coefficient system is linear; it is returned in ascending chain form
// (wu_chain of the coefficients), with the coefficients kept in `raw`.
DeterminingSystem classical_determining(const PDESystem& pde, const Rank& rank);

// Regular case: the first independent's infinitesimal is normalized to 1.
// Other branches raise UnimplementedBranchError.
DeterminingSystem nonclassical_determining(const PDESystem& pde, const Rank& rank,
                                           std::size_t normalized = 0);

} // namespace symchain
