#pragma once

// Connection between the classical and nonclassical determining systems:
// the map xi_i' = xi_1' xi_i, eta' = xi_1' eta, the split of the classical
// chain, the bridging chain C, the identities IS * p_i = sum D q_v, and the
// nontriviality test.

#include "symchain/harness.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symchain {

// Members of the classical chain whose leaders are derivatives of the
// normalized infinitesimal (D''), and the rest. RankError unless that
// infinitesimal is the highest unknown of the chain's rank.
std::pair<Chain, Chain> split_dpp(const Chain& cprime, SymId xi1);

// The ring of (Lambda, xi_1'): z, the nonclassical unknowns in the classical
// order and xi_1' on top. The classical unknowns are declared as well so that
// images can be computed in it.
RingRef bridge_ring(const PDESystem& pde, const Rank& rank);

struct Cln1Image {
    Chain source;
    std::vector<Expr> image;
    RingRef ring;
};

Cln1Image apply_cln1(const Chain& cprime, const PDESystem& pde, const Rank& rank);

struct BridgeResult {
    DeterminingSystem classical;
    DeterminingSystem nonclassical;
    SymId xi1; // name of the normalized classical unknown (taup)

    Chain cprime;
    Expr is_cprime;
    Chain dpp;
    Chain rest;

    RingRef ring;                  // induced rank
    Chain dpp_image;
    std::vector<Expr> rest_image;
    std::vector<ReductionCertificate> reductions; // rest_image[i] modulo dpp_image
    std::vector<unsigned> stripped;               // power of xi_1' removed from each
    std::vector<std::size_t> source;              // rest member each C member came from
    Chain c;
    Expr is_c;

    std::vector<ReductionCertificate> identities; // p_i modulo c
};

// Steps 1 to 4. ISVanishesError if IS(C') is zero, NonzeroRemainderError if
// some p_i does not reduce to zero modulo C.
BridgeResult build_bridge(const PDESystem& pde, const Rank& rank);

// Step 4 alone: the certificates of each p_i modulo C, NonzeroRemainderError
// at the first p_i that does not reduce to zero.
std::vector<ReductionCertificate> identities(const std::vector<Expr>& d, const Chain& c);

enum class Verdict { Nontrivial, ClassicalEquivalent, Inconclusive };
std::string_view verdict_name(Verdict v);

struct TrivialityVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::string subset;      // "D''" or "C'"
    Expr witness;            // polynomial forcing xi_1' = 0
    std::optional<Fraction> xi1; // value of xi_1' for a classical equivalent
    std::vector<Expr> image; // the substituted subset, in xi_1' alone
};

// Substitutes the candidate into the image of D'' (then of C') with xi_1' as
// the only unknown. Nontrivial when the completed linear system contains a
// polynomial c * xi_1' with c != 0; classical equivalent when one of
// 1, z_i, exp(z_i), exp(-z_i) solves the whole image.
TrivialityVerdict triviality_test(const Candidate& cand, const BridgeResult& bridge);

struct AuditEntry {
    std::string candidate;
    bool normalizable = true; // false when the candidate is classical with xi_1' = 0
    bool in_cprime = false;   // a member of Z(C') (directly or through the map)
    bool in_c = false;
    bool in_d = false;
    std::optional<TrivialityVerdict> verdict;
    std::optional<MembershipReport> cprime_report;
    MembershipReport c_report;
    MembershipReport d_report;
};

// Membership of each candidate in Z(C'), Z(C) and Z(D).
// InclusionViolationError when one of the inclusions fails.
std::vector<AuditEntry> inclusion_audit(const BridgeResult& bridge,
                                        const std::vector<Candidate>& candidates);

} // namespace symchain
