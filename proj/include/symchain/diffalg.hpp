#pragma once

// Differential polynomials under a rank: leaders, initials, separants,
// ascending chains, certified pseudo-reduction and Wu's chain construction.

#include "symchain/calculus.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace symchain {

enum class RankScheme {
    Graded, // |alpha|, then unknown precedence, then alpha lexicographically
    Lex,    // alpha lexicographically from the top independent, then unknown precedence
};

// Both precedence lists are given lowest first: "t<x<u ; xi<eta<tau".
class Rank {
public:
    Rank() = default;
    Rank(std::vector<SymId> independents, std::vector<SymId> unknowns,
         RankScheme scheme = RankScheme::Graded);

    const std::vector<SymId>& independents() const { return independents_; }
    const std::vector<SymId>& unknowns() const { return unknowns_; }
    RankScheme scheme() const { return scheme_; }

    // Derivatives of ranked unknowns are the ranked atoms; everything else
    // (independents, parameters, opaque data, closed functions) is base field.
    bool is_ranked(Atom a) const;
    std::optional<std::size_t> unknown_index(SymId name) const;
    // alpha of a ranked atom re-expressed over independents().
    std::vector<std::uint16_t> full_alpha(Atom a) const;
    std::strong_ordering compare(Atom a, Atom b) const;
    bool less(Atom a, Atom b) const { return compare(a, b) < 0; }

    // a is a (not necessarily proper) derivative of b; sets delta = a - b
    // over independents().
    bool is_derivative_of(Atom a, Atom b, std::vector<std::uint16_t>* delta = nullptr) const;

    std::string to_string() const;

private:
    std::vector<SymId> independents_;
    std::vector<SymId> unknowns_;
    RankScheme scheme_ = RankScheme::Graded;
};

// A VarSpace for differentiation together with a Rank.
struct DiffRing {
    VarSpace space;
    Rank rank;
};
using RingRef = std::shared_ptr<const DiffRing>;

class DiffPoly {
public:
    DiffPoly(Expr body, RingRef ring);

    const Expr& body() const { return body_; }
    const RingRef& ring() const { return ring_; }
    bool is_degenerate() const { return !leader_; }

    Atom leader() const;          // DegenerateError when degenerate
    std::uint32_t degree() const; // degree in the leader
    const Expr& initial() const;
    const Expr& separant() const;

private:
    Expr body_;
    RingRef ring_;
    Atom leader_;
    std::uint32_t degree_ = 0;
    Expr initial_;
    Expr separant_;
};

// Highest ranked atom of e, or a null Atom.
Atom leader_of(const Expr& e, const Rank& rank);

bool is_reduced(const Expr& f, const DiffPoly& g);

// Ranking of polynomials: leader first, then degree in the leader.
std::strong_ordering compare_polys(const DiffPoly& a, const DiffPoly& b);

class Chain {
public:
    Chain() = default;
    // Sorts by leader; ChainError unless the members form an ascending chain.
    Chain(std::vector<Expr> members, RingRef ring);

    const std::vector<DiffPoly>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    const RingRef& ring() const { return ring_; }
    std::vector<Expr> bodies() const;

    // Product of the initials, times each separant that differs from its
    // initial (for linear members initial and separant coincide).
    Expr is_product() const;

    // D^beta of member i, beta over ring->rank.independents().
    Expr derived_member(std::size_t i, const std::vector<std::uint16_t>& beta) const;

private:
    std::vector<DiffPoly> members_;
    RingRef ring_;
};

bool is_chain(const std::vector<Expr>& polys, const RingRef& ring);

struct CertificateTerm {
    std::size_t member;
    std::vector<std::uint16_t> beta; // over rank.independents()
    Expr coeff;
};

// multiplier * input = sum coeff * D^beta(member) + remainder
struct ReductionCertificate {
    Expr input;
    Expr multiplier;
    std::vector<CertificateTerm> terms;
    Expr remainder;
};

ReductionCertificate prem(const Expr& f, const Chain& chain);

// Expands the certificate and checks the identity exactly.
bool verify_certificate(const ReductionCertificate& cert, const Chain& chain);

// Divides out the rational content and the largest monomial in base-field
// independents; the result has a positive leading coefficient.
Expr content_free(const Expr& e, const DiffRing& ring);

struct WuOptions {
    // Work on the generic component: divide remainders by powers of the
    // undifferentiated unknowns and by the nonmonomial parts of the current
    // initials, and adjoin one remainder at a time (the lowest first).
    bool generic = false;
    // Also adjoin the reduced cross-derivative conditions between members
    // whose leaders are derivatives of the same unknown, until all vanish.
    // Implies generic.
    bool coherent = false;
};

// Wu's algorithm. Zero inputs are dropped.
Chain wu_chain(const std::vector<Expr>& system, const RingRef& ring, const WuOptions& options = {});

// Chooses a basic set (a minimal ascending chain) from `polys`.
std::vector<Expr> basic_set(const std::vector<Expr>& polys, const RingRef& ring);

} // namespace symchain
