#include "symchain/bridge.hpp"

#include "symchain/errors.hpp"

#include <algorithm>
#include <sstream>

namespace symchain {

namespace {

std::string show(const Expr& e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

std::vector<std::string> arg_names(FunctionRef fn) {
    std::vector<std::string> out;
    for (SymId a : fn->args) out.push_back(name_of(a));
    return out;
}

Atom value_atom(FunctionRef fn) {
    return Atom::deriv(fn, std::vector<std::uint16_t>(fn->args.size(), 0));
}

SymId classical_name(SymId base) { return intern(name_of(base) + kClassicalSuffix); }

// Largest power of `a` (the bare atom, not its derivatives) dividing e.
unsigned power_content(const Expr& e, Atom a) {
    if (e.is_zero()) return 0;
    unsigned k = ~0u;
    for (const auto& t : e.terms()) k = std::min(k, t.mono.degree(a));
    return k;
}

// Completes a linear system in a single unknown with its integrability
// conditions (cross derivatives of members with leaders of the same function),
// a bounded number of rounds. Returns the last chain.
Chain linear_completion(std::vector<Expr> polys, const RingRef& ring, std::size_t rounds = 6) {
    Chain chain = wu_chain(polys, ring);
    const auto& xs = ring->rank.independents();
    for (std::size_t round = 0; round < rounds; ++round) {
        std::vector<Expr> added;
        const auto& ms = chain.members();
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (ms[i].leader().order() == 0) return chain;
            for (std::size_t j = i + 1; j < ms.size(); ++j) {
                if (ms[i].leader().function() != ms[j].leader().function()) continue;
                auto ai = ring->rank.full_alpha(ms[i].leader());
                auto aj = ring->rank.full_alpha(ms[j].leader());
                std::vector<std::uint16_t> di(xs.size()), dj(xs.size());
                for (std::size_t k = 0; k < xs.size(); ++k) {
                    auto m = std::max(ai[k], aj[k]);
                    di[k] = static_cast<std::uint16_t>(m - ai[k]);
                    dj[k] = static_cast<std::uint16_t>(m - aj[k]);
                }
                Expr s = ms[j].initial() * chain.derived_member(i, di) -
                         ms[i].initial() * chain.derived_member(j, dj);
                Expr r = prem(s, chain).remainder;
                if (!r.is_zero()) added.push_back(content_free(r, *ring));
            }
        }
        if (added.empty()) return chain;
        polys = chain.bodies();
        polys.insert(polys.end(), added.begin(), added.end());
        chain = wu_chain(polys, ring);
    }
    return chain;
}

std::vector<Expr> numerators(const std::vector<Expr>& polys, const std::vector<Binding>& bindings,
                             const VarSpace& space) {
    std::vector<Expr> out;
    for (const auto& p : polys) {
        Expr n = substitute(p, bindings, space).num();
        if (!n.is_zero()) out.push_back(n);
    }
    return out;
}

} // namespace

std::pair<Chain, Chain> split_dpp(const Chain& cprime, SymId xi1) {
    const RingRef& ring = cprime.ring();
    const auto& us = ring->rank.unknowns();
    if (us.empty() || us.back() != xi1) {
        throw RankError("the rank must place " + name_of(xi1) + " above every other unknown");
    }
    std::vector<Expr> dpp;
    std::vector<Expr> rest;
    for (const auto& m : cprime.members()) {
        (m.leader().function()->name == xi1 ? dpp : rest).push_back(m.body());
    }
    return {Chain(dpp, ring), Chain(rest, ring)};
}

RingRef bridge_ring(const PDESystem& pde, const Rank& rank) {
    RingRef classical = determining_ring(pde, rank, GeneratorKind::Classical);
    RingRef nonclassical = determining_ring(pde, rank, GeneratorKind::Nonclassical);
    auto ring = std::make_shared<DiffRing>();
    ring->space = classical->space;
    for (FunctionRef fn : nonclassical->space.functions()) {
        if (!ring->space.declares(fn->name)) ring->space.add_function(name_of(fn->name), arg_names(fn), fn->kind);
    }
    const auto& cu = classical->rank.unknowns();
    std::vector<SymId> unknowns = nonclassical->rank.unknowns();
    unknowns.push_back(cu.back());
    if (cu.back() != classical_name(intern(pde.infinitesimal_names()[0]))) {
        throw RankError("the rank must place " + pde.infinitesimal_names()[0] +
                        " above every other unknown");
    }
    ring->rank = Rank(rank.independents(), unknowns, rank.scheme());
    return ring;
}

Cln1Image apply_cln1(const Chain& cprime, const PDESystem& pde, const Rank& rank) {
    Cln1Image out;
    out.source = cprime;
    out.ring = bridge_ring(pde, rank);
    const auto names = pde.infinitesimal_names();
    const VarSpace& space = out.ring->space;
    FunctionRef xi1 = space.function(classical_name(intern(names[0])));
    std::vector<Binding> bindings;
    for (std::size_t i = 1; i < names.size(); ++i) {
        FunctionRef from = space.function(classical_name(intern(names[i])));
        FunctionRef to = space.function(intern(names[i]));
        bindings.push_back(Binding{value_atom(from), Fraction(Expr(value_atom(xi1)) * Expr(value_atom(to)))});
    }
    for (const auto& m : cprime.members()) {
        out.image.push_back(substitute(m.body(), bindings, space).as_polynomial());
    }
    return out;
}

BridgeResult build_bridge(const PDESystem& pde, const Rank& rank) {
    BridgeResult br;
    const auto names = pde.infinitesimal_names();
    br.xi1 = classical_name(intern(names[0]));

    // Step 1.
    br.classical = classical_determining(pde, rank);
    br.nonclassical = nonclassical_determining(pde, rank);

    // Step 2.
    br.cprime = wu_chain(br.classical.bodies(), br.classical.ring);
    br.is_cprime = br.cprime.is_product();
    if (br.is_cprime.is_zero()) throw ISVanishesError("IS(C') is zero");
    std::tie(br.dpp, br.rest) = split_dpp(br.cprime, br.xi1);

    // Step 3.
    Cln1Image dpp_image = apply_cln1(br.dpp, pde, rank);
    Cln1Image rest_image = apply_cln1(br.rest, pde, rank);
    br.ring = dpp_image.ring;
    // The image of D'' need not be autoreduced (tau'_t - 2 (tau' xi)_x
    // contains tau'_x); its chain form is used.
    br.dpp_image = wu_chain(dpp_image.image, br.ring);
    br.rest_image = rest_image.image;
    Atom xi1 = value_atom(br.ring->space.function(br.xi1));
    std::vector<Expr> c;
    for (std::size_t i = 0; i < br.rest_image.size(); ++i) {
        ReductionCertificate cert = prem(br.rest_image[i], br.dpp_image);
        Expr r = cert.remainder;
        unsigned k = power_content(r, xi1);
        if (k > 0) r = divide_monomial(r, Monomial(xi1, k));
        br.reductions.push_back(std::move(cert));
        br.stripped.push_back(k);
        if (r.is_zero()) continue;
        if (r.contains(xi1) || leader_of(r, br.ring->rank).function() == xi1.function()) {
            throw InternalError("bridging polynomial still involves " + name_of(br.xi1) + ": " + show(r));
        }
        c.push_back(r);
        br.source.push_back(i);
    }
    br.c = Chain(c, br.ring);
    {
        // Chain sorts its members; keep `source` aligned with it.
        std::vector<std::size_t> sorted;
        for (const auto& m : br.c.members()) {
            auto it = std::find(c.begin(), c.end(), m.body());
            sorted.push_back(br.source[static_cast<std::size_t>(it - c.begin())]);
        }
        br.source = std::move(sorted);
    }
    br.is_c = br.c.is_product();
    if (br.is_c.is_zero()) throw ISVanishesError("IS(C) is zero");

    // Step 4.
    br.identities = identities(br.nonclassical.bodies(), br.c);
    return br;
}

std::vector<ReductionCertificate> identities(const std::vector<Expr>& d, const Chain& c) {
    std::vector<ReductionCertificate> out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        ReductionCertificate cert = prem(d[i], c);
        if (!cert.remainder.is_zero()) {
            throw NonzeroRemainderError("p" + std::to_string(i + 1) + " has remainder " +
                                        show(cert.remainder) + " modulo C");
        }
        out.push_back(std::move(cert));
    }
    return out;
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Nontrivial: return "nontrivial";
    case Verdict::ClassicalEquivalent: return "classical_equivalent";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

TrivialityVerdict triviality_test(const Candidate& cand, const BridgeResult& bridge) {
    if (cand.kind == GeneratorKind::Classical) {
        throw UsageError("triviality test takes a nonclassical candidate");
    }
    // Bindings for the nonclassical unknowns; xi_1' stays free.
    std::vector<Expr> all = bridge.dpp_image.bodies();
    all.insert(all.end(), bridge.rest_image.begin(), bridge.rest_image.end());
    auto bindings = candidate_bindings(cand, bridge.nonclassical.ring, bridge.nonclassical.bodies());

    FunctionRef xi1 = bridge.ring->space.function(bridge.xi1);
    auto ring = std::make_shared<DiffRing>();
    ring->space = cand.space;
    if (!ring->space.declares(xi1->name)) ring->space.add_function(name_of(xi1->name), arg_names(xi1), xi1->kind);
    ring->rank = Rank(bridge.ring->rank.independents(), {xi1->name}, bridge.ring->rank.scheme());
    VarSpace space = ring->space;
    for (FunctionRef fn : bridge.ring->space.functions()) {
        if (!space.declares(fn->name)) space.add_function(name_of(fn->name), arg_names(fn), fn->kind);
    }

    TrivialityVerdict out;
    auto attempt = [&](const std::vector<Expr>& subset, const char* label) {
        std::vector<Expr> image = numerators(subset, bindings, space);
        out.image = image;
        out.subset = label;
        if (image.empty()) return false;
        Chain chain = linear_completion(image, ring);
        for (const auto& m : chain.members()) {
            if (m.leader().order() == 0) {
                out.verdict = Verdict::Nontrivial;
                out.witness = m.body();
                return true;
            }
        }
        return false;
    };
    if (attempt(bridge.dpp_image.bodies(), "D''")) return out;
    if (attempt(all, "C'")) return out;

    // Ansatz catalog for xi_1'.
    std::vector<Fraction> catalog{Fraction(1)};
    for (SymId z : ring->space.independents()) catalog.emplace_back(Expr(Atom::symbol(z)));
    for (SymId z : ring->space.independents()) {
        catalog.emplace_back(make_closed(ClosedFn::Exp, Expr(Atom::symbol(z))));
        catalog.emplace_back(make_closed(ClosedFn::Exp, -Expr(Atom::symbol(z))));
    }
    for (const auto& guess : catalog) {
        auto with = bindings;
        with.insert(with.begin(), Binding{value_atom(xi1), guess});
        if (numerators(all, with, space).empty()) {
            out.verdict = Verdict::ClassicalEquivalent;
            out.subset = "C'";
            out.xi1 = guess;
            out.witness = Expr();
            return out;
        }
    }
    out.verdict = Verdict::Inconclusive;
    out.subset = "C'";
    return out;
}

std::vector<AuditEntry> inclusion_audit(const BridgeResult& bridge,
                                        const std::vector<Candidate>& candidates) {
    std::vector<AuditEntry> out;
    const auto names = bridge.classical.generator.unknowns;
    std::vector<std::string> inf;
    for (FunctionRef fn : bridge.classical.generator.unknowns) {
        std::string n = name_of(fn->name);
        inf.push_back(n.substr(0, n.size() - std::string(kClassicalSuffix).size()));
    }
    for (const auto& cand : candidates) {
        AuditEntry e;
        e.candidate = cand.name;
        Candidate nc = cand;
        if (cand.kind == GeneratorKind::Classical) {
            e.cprime_report = check_membership(cand, bridge.cprime.bodies(), bridge.classical.ring, "C'");
            e.in_cprime = e.cprime_report->all_zero();
            const Fraction* xi1 = cand.value_of(inf[0]);
            if (!xi1 || xi1->is_zero()) {
                e.normalizable = false;
                out.push_back(std::move(e));
                continue;
            }
            nc = normalized_image(cand, inf);
        } else if (cand.side.empty()) {
            e.verdict = triviality_test(nc, bridge);
            e.in_cprime = e.verdict->verdict == Verdict::ClassicalEquivalent;
        }
        e.c_report = check_membership(nc, bridge.c.bodies(), bridge.ring, "C");
        e.d_report = check_membership(nc, bridge.nonclassical.bodies(), bridge.nonclassical.ring, "D");
        e.in_c = e.c_report.all_zero();
        e.in_d = e.d_report.all_zero();
        if (e.in_cprime && !e.in_c) {
            throw InclusionViolationError(cand.name + " lies in Z(C') but not in Z(C)");
        }
        if (e.in_c && !e.in_d) {
            throw InclusionViolationError(cand.name + " lies in Z(C) but not in Z(D)");
        }
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace symchain
