#pragma once

// Candidate infinitesimals and membership checks against determining systems.

#include "symchain/symgen.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symchain {

struct Candidate {
    std::string name;
    // Classical candidates give the primed infinitesimals under their base
    // names (tau, xi, eta); nonclassical ones omit the normalized slot.
    GeneratorKind kind = GeneratorKind::Nonclassical;
    // The z-space of the problem plus the candidate's own constants and free
    // functions (ranked unknowns of the side system).
    VarSpace space;
    std::vector<Atom> parameters;
    std::vector<FunctionRef> functions;
    // Values for problem parameters and opaque functions (sigma = 1/2, f(u) = ...).
    std::vector<Binding> instantiations;
    std::vector<std::pair<std::string, Fraction>> infinitesimals;
    // Side system the free functions satisfy (each entry = 0) and its rank.
    std::vector<Expr> side;
    std::optional<Rank> side_rank;
    // `assume H != 0`: factors the candidate declares nonzero. They are
    // divided out of the residual numerators.
    std::vector<Expr> nonzero;
    // Corpus expectations: `expect D zero`, `expect C nonzero`,
    // `expect trivial nontrivial`.
    std::vector<std::pair<std::string, std::string>> expectations;
    // A known disagreement with the source text; failed expectations are
    // then reported as an expected discrepancy instead of a failure.
    std::string discrepancy;

    const Fraction* value_of(const std::string& infinitesimal) const;
};

// The nonclassical candidate xi_i = xi_i'/xi_1', eta = eta'/xi_1' of a
// classical one (DivisionByZeroError when xi_1' = 0).
Candidate normalized_image(const Candidate& classical, const std::vector<std::string>& names);

// The candidate in the requested form: classical candidates pass through
// normalized_image, nonclassical ones gain names[0] = 1.
Candidate as_nonclassical(const Candidate& cand, const std::vector<std::string>& names);
Candidate as_classical(const Candidate& cand, const std::vector<std::string>& names);

struct PolyResidual {
    Expr input;
    Fraction residual; // after substitution
    Expr reduced;      // numerator, reduced by the side chain when there is one
    bool zero() const { return reduced.is_zero(); }
};

struct MembershipReport {
    std::string candidate;
    std::string system;
    std::vector<PolyResidual> residuals;
    std::optional<Expr> side_is; // IS product of the side chain

    bool all_zero() const;
    std::vector<std::size_t> nonzero() const;
};

// Substitutes the candidate into every polynomial of `polys` (living in
// `ring`). BindingError if an unknown occurring in `polys` has no value.
MembershipReport check_membership(const Candidate& cand, const std::vector<Expr>& polys,
                                  const RingRef& ring, const std::string& system_name);

// Bindings of the candidate for the unknowns of `ring` plus instantiations.
std::vector<Binding> candidate_bindings(const Candidate& cand, const RingRef& ring,
                                        const std::vector<Expr>& polys);

} // namespace symchain
