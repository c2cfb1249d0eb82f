#include "symchain/harness.hpp"

#include "symchain/errors.hpp"

#include <algorithm>
#include <set>

namespace symchain {

const Fraction* Candidate::value_of(const std::string& infinitesimal) const {
    for (const auto& [n, v] : infinitesimals) {
        if (n == infinitesimal) return &v;
    }
    return nullptr;
}

Candidate normalized_image(const Candidate& classical, const std::vector<std::string>& names) {
    if (names.empty()) throw UsageError("no infinitesimal names");
    const Fraction* xi1 = classical.value_of(names[0]);
    if (!xi1 || xi1->is_zero()) {
        throw DivisionByZeroError("candidate " + classical.name + " has " + names[0] + " = 0");
    }
    Candidate out = classical;
    out.kind = GeneratorKind::Nonclassical;
    out.infinitesimals.clear();
    for (std::size_t i = 1; i < names.size(); ++i) {
        const Fraction* v = classical.value_of(names[i]);
        Fraction value = v ? *v / *xi1 : Fraction();
        out.infinitesimals.emplace_back(names[i], value);
    }
    return out;
}

Candidate as_nonclassical(const Candidate& cand, const std::vector<std::string>& names) {
    if (cand.kind == GeneratorKind::Nonclassical) return cand;
    return normalized_image(cand, names);
}

Candidate as_classical(const Candidate& cand, const std::vector<std::string>& names) {
    if (cand.kind == GeneratorKind::Classical) return cand;
    if (names.empty()) throw UsageError("no infinitesimal names");
    Candidate out = cand;
    out.kind = GeneratorKind::Classical;
    out.infinitesimals.insert(out.infinitesimals.begin(), {names[0], Fraction(1)});
    return out;
}

bool MembershipReport::all_zero() const {
    return std::all_of(residuals.begin(), residuals.end(), [](const PolyResidual& r) { return r.zero(); });
}

std::vector<std::size_t> MembershipReport::nonzero() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if (!residuals[i].zero()) out.push_back(i);
    }
    return out;
}

namespace {

bool mentions(const std::vector<Expr>& polys, FunctionRef fn) {
    for (const auto& p : polys) {
        for (Atom a : p.atoms_deep()) {
            if (a.is_deriv() && a.function() == fn) return true;
        }
    }
    return false;
}

// The candidate's space with the ring's functions added.
VarSpace merged_space(const Candidate& cand, const DiffRing& ring) {
    VarSpace vs = cand.space;
    for (FunctionRef fn : ring.space.functions()) {
        if (vs.declares(fn->name)) continue;
        std::vector<std::string> args;
        for (SymId a : fn->args) args.push_back(name_of(a));
        vs.add_function(name_of(fn->name), args, fn->kind);
    }
    return vs;
}

RingRef side_ring(const Candidate& cand) {
    auto ring = std::make_shared<DiffRing>();
    ring->space = cand.space;
    if (cand.side_rank) {
        ring->rank = *cand.side_rank;
    } else {
        std::vector<SymId> unknowns;
        for (FunctionRef fn : cand.functions) unknowns.push_back(fn->name);
        ring->rank = Rank(cand.space.independents(), unknowns);
    }
    return ring;
}

} // namespace

std::vector<Binding> candidate_bindings(const Candidate& cand, const RingRef& ring,
                                        const std::vector<Expr>& polys) {
    std::vector<Binding> out;
    const std::string suffix = kClassicalSuffix;
    for (SymId u : ring->rank.unknowns()) {
        FunctionRef fn = ring->space.function(u);
        if (!fn) continue;
        std::string n = name_of(u);
        const Fraction* v = cand.value_of(n);
        if (!v && cand.kind == GeneratorKind::Classical && n.size() > suffix.size() &&
            n.compare(n.size() - suffix.size(), suffix.size(), suffix) == 0) {
            v = cand.value_of(n.substr(0, n.size() - suffix.size()));
        }
        if (!v) {
            if (mentions(polys, fn)) {
                throw BindingError("candidate " + cand.name + " gives no value for " + n);
            }
            continue;
        }
        out.push_back(Binding{Atom::deriv(fn, std::vector<std::uint16_t>(fn->args.size(), 0)), *v});
    }
    for (const auto& b : cand.instantiations) out.push_back(b);
    return out;
}

MembershipReport check_membership(const Candidate& cand, const std::vector<Expr>& polys,
                                  const RingRef& ring, const std::string& system_name) {
    MembershipReport report;
    report.candidate = cand.name;
    report.system = system_name;
    auto bindings = candidate_bindings(cand, ring, polys);
    for (const auto& h : cand.nonzero) {
        if (h.is_zero()) throw UsageError("candidate " + cand.name + " assumes 0 != 0");
    }
    VarSpace space = merged_space(cand, *ring);

    std::optional<Chain> side;
    if (!cand.side.empty()) {
        side = wu_chain(cand.side, side_ring(cand));
        report.side_is = side->is_product();
    }
    for (const auto& p : polys) {
        PolyResidual r;
        r.input = p;
        r.residual = substitute(p, bindings, space);
        r.reduced = side ? prem(r.residual.num(), *side).remainder : r.residual.num();
        for (const auto& h : cand.nonzero) {
            while (!r.reduced.is_zero()) {
                auto q = exact_quotient(r.reduced, h);
                if (!q || q->is_constant()) break;
                r.reduced = *q;
            }
        }
        report.residuals.push_back(std::move(r));
    }
    return report;
}

} // namespace symchain
