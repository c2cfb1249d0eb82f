#include "symchain/symgen.hpp"

#include "symchain/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace symchain {

namespace {

std::string show(const Expr& e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

bool is_jet(Atom a) { return a.is_deriv() && a.function()->kind == FunctionKind::Dependent; }

std::vector<std::string> z_names(const VarSpace& vs) {
    std::vector<std::string> z;
    for (SymId s : vs.independents()) z.push_back(name_of(s));
    for (FunctionRef f : vs.dependents()) z.push_back(name_of(f->name));
    return z;
}

} // namespace

unsigned PDESystem::order() const {
    unsigned k = 0;
    for (const auto& eq : equations) {
        k = std::max(k, eq.pivot.is_deriv() ? eq.pivot.order() : 0u);
        for (Atom a : eq.rhs.atoms()) {
            if (is_jet(a)) k = std::max(k, a.order());
        }
    }
    return k;
}

std::vector<std::string> default_infinitesimals(std::size_t p, std::size_t q) {
    std::vector<std::string> out;
    if (p == 2) {
        out = {"tau", "xi"};
    } else {
        for (std::size_t i = 1; i <= p; ++i) out.push_back("xi" + std::to_string(i));
    }
    static const char* deps[] = {"eta", "phi", "psi", "chi"};
    for (std::size_t a = 0; a < q; ++a) {
        out.push_back(q <= 4 ? std::string(deps[a]) : "eta" + std::to_string(a + 1));
    }
    return out;
}

std::vector<std::string> PDESystem::infinitesimal_names() const {
    const std::size_t p = space.independents().size();
    const std::size_t q = space.dependents().size();
    if (infinitesimals.empty()) return default_infinitesimals(p, q);
    if (infinitesimals.size() != p + q) {
        throw NameError("expected " + std::to_string(p + q) + " infinitesimal names");
    }
    return infinitesimals;
}

Generator make_generator(const PDESystem& pde, GeneratorKind kind) {
    const auto names = pde.infinitesimal_names();
    const auto z = z_names(pde.space);
    std::vector<SymId> args;
    for (const auto& n : z) args.push_back(intern(n));
    const std::size_t p = pde.space.independents().size();

    Generator gen{kind, {}, {}, {}};
    for (std::size_t i = 0; i < names.size(); ++i) {
        Expr value;
        if (kind == GeneratorKind::Nonclassical && i == 0) {
            value = Expr(1);
        } else {
            std::string n = names[i] + (kind == GeneratorKind::Classical ? kClassicalSuffix : "");
            if (pde.space.declares(intern(n))) {
                throw NameError("infinitesimal name clashes with a declaration: " + n);
            }
            FunctionRef fn = declare_function(intern(n), args, FunctionKind::Unknown);
            gen.unknowns.push_back(fn);
            value = Expr(Atom::deriv(fn, std::vector<std::uint16_t>(args.size(), 0)));
        }
        (i < p ? gen.xi : gen.eta).push_back(value);
    }
    return gen;
}

VarSpace jet_space(const PDESystem& pde, const Generator& gen) {
    VarSpace vs = pde.space;
    for (FunctionRef fn : gen.unknowns) {
        std::vector<std::string> args;
        for (SymId a : fn->args) args.push_back(name_of(a));
        vs.add_function(name_of(fn->name), args, FunctionKind::Unknown);
    }
    return vs;
}

namespace {

class Prolongator {
public:
    Prolongator(const PDESystem& pde, const Generator& gen)
        : pde_(pde), gen_(gen), space_(jet_space(pde, gen)) {}

    const Expr& coefficient(Atom jet) {
        auto it = memo_.find(jet);
        if (it != memo_.end()) return it->second;
        Expr value;
        FunctionRef fn = jet.is_symbol() ? pde_.space.dependent(jet.name()) : jet.function();
        std::size_t a = dependent_index(fn);
        if (jet.is_symbol()) {
            value = gen_.eta[a];
        } else {
            auto alpha = jet.alpha();
            std::size_t j = alpha.size();
            while (alpha[j - 1] == 0) --j;
            --j;
            alpha[j] -= 1;
            Atom lower = Atom::deriv(fn, alpha);
            SymId xj = fn->args[j];
            value = total_derivative(coefficient(lower), xj, space_);
            for (std::size_t i = 0; i < gen_.xi.size(); ++i) {
                const Expr& dxi = xi_derivative(i, j);
                if (dxi.is_zero()) continue;
                auto beta = alpha;
                beta[i] += 1;
                value -= Expr(Atom::deriv(fn, beta)) * dxi;
            }
        }
        return memo_.emplace(jet, std::move(value)).first->second;
    }

    const VarSpace& space() const { return space_; }

private:
    std::size_t dependent_index(FunctionRef fn) const {
        const auto& deps = pde_.space.dependents();
        auto it = std::find(deps.begin(), deps.end(), fn);
        if (it == deps.end()) throw NameError("not a dependent variable");
        return static_cast<std::size_t>(it - deps.begin());
    }

    const Expr& xi_derivative(std::size_t i, std::size_t j) {
        auto key = std::make_pair(i, j);
        auto it = dxi_.find(key);
        if (it == dxi_.end()) {
            SymId xj = pde_.space.independents()[j];
            it = dxi_.emplace(key, total_derivative(gen_.xi[i], xj, space_)).first;
        }
        return it->second;
    }

    const PDESystem& pde_;
    const Generator& gen_;
    VarSpace space_;
    std::map<Atom, Expr> memo_;
    std::map<std::pair<std::size_t, std::size_t>, Expr> dxi_;
};

} // namespace

std::map<Atom, Expr> prolong(const PDESystem& pde, const Generator& gen,
                             const std::vector<Atom>& jets) {
    Prolongator pr(pde, gen);
    std::map<Atom, Expr> out;
    for (Atom j : jets) out.emplace(j, pr.coefficient(j));
    return out;
}

Expr apply_prolongation(const Expr& e, const PDESystem& pde, const Generator& gen) {
    Prolongator pr(pde, gen);
    Expr out;
    const auto& xs = pde.space.independents();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Expr d = partial_derivative(e, Atom::symbol(xs[i]));
        if (!d.is_zero()) out += gen.xi[i] * d;
    }
    std::vector<Atom> targets;
    for (FunctionRef f : pde.space.dependents()) targets.push_back(Atom::symbol(f->name));
    for (Atom a : e.atoms()) {
        if (is_jet(a)) targets.push_back(a);
    }
    for (Atom a : targets) {
        Expr d = partial_derivative(e, a);
        if (!d.is_zero()) out += pr.coefficient(a) * d;
    }
    return out;
}

namespace {

std::vector<Expr> bodies_of(const std::vector<DeterminingPoly>& polys) {
    std::vector<Expr> out;
    for (const auto& p : polys) out.push_back(p.body);
    return out;
}

} // namespace

std::vector<Expr> DeterminingSystem::bodies() const { return bodies_of(polys); }

VarSpace z_space(const PDESystem& pde) {
    VarSpace vs;
    for (const auto& n : z_names(pde.space)) vs.add_independent(n);
    for (Atom p : pde.space.parameters()) vs.add_parameter(name_of(p.name()), p.relation());
    for (FunctionRef fn : pde.space.functions()) {
        if (fn->kind != FunctionKind::Opaque) continue;
        std::vector<std::string> args;
        for (SymId a : fn->args) args.push_back(name_of(a));
        vs.add_function(name_of(fn->name), args, FunctionKind::Opaque);
    }
    return vs;
}

RingRef determining_ring(const PDESystem& pde, const Rank& rank, GeneratorKind kind) {
    auto ring = std::make_shared<DiffRing>();
    ring->space = z_space(pde);
    const auto z = z_names(pde.space);

    std::set<SymId> zs;
    for (const auto& n : z) zs.insert(intern(n));
    std::set<SymId> ranked(rank.independents().begin(), rank.independents().end());
    if (zs != ranked) throw RankError("rank must order exactly the variables " + [&] {
        std::string s;
        for (const auto& n : z) s += (s.empty() ? "" : ",") + n;
        return s;
    }());

    const auto names = pde.infinitesimal_names();
    std::set<SymId> declared;
    for (const auto& n : names) declared.insert(intern(n));
    std::set<SymId> listed(rank.unknowns().begin(), rank.unknowns().end());
    if (declared != listed) throw RankError("rank must list every infinitesimal exactly once");

    Generator gen = make_generator(pde, kind);
    std::vector<std::string> zargs(z.begin(), z.end());
    for (FunctionRef fn : gen.unknowns) {
        ring->space.add_function(name_of(fn->name), zargs, FunctionKind::Unknown);
    }
    std::vector<SymId> unknowns;
    for (SymId u : rank.unknowns()) {
        if (kind == GeneratorKind::Classical) {
            unknowns.push_back(intern(name_of(u) + kClassicalSuffix));
        } else if (u != intern(names[0])) {
            unknowns.push_back(u);
        }
    }
    ring->rank = Rank(rank.independents(), unknowns, rank.scheme());
    return ring;
}

namespace {

// Splits the on-shell criterion into coefficients of jet monomials and
// appends the primitive, nonconstant, pairwise non-proportional ones. Powers
// of the atoms in `nonzero` (single-atom denominators cleared on the way) are
// divided out.
void collect_into(DeterminingSystem& sys, const Expr& criterion, std::size_t equation,
                  const std::set<Atom>& nonzero = {}) {
    for (auto& [mono, coeff] : collect_coefficients(criterion, is_jet)) {
        Expr body = coeff;
        if (!nonzero.empty()) {
            body = divide_monomial(body, monomial_content(body, [&](Atom a) { return nonzero.count(a) > 0; }));
        }
        body = primitive(body).second;
        if (body.is_constant()) {
            throw InconsistentSystemError("determining equation " + show(body) + " = 0");
        }
        bool dup = std::any_of(sys.polys.begin(), sys.polys.end(),
                               [&](const DeterminingPoly& p) { return proportional(p.body, body); });
        if (!dup) sys.polys.push_back(DeterminingPoly{body, equation, mono});
    }
}

// Rank on dependent jets: order, then dependent precedence (as placed in the
// rank's variable list), then alpha lexicographically from the top independent.
struct JetOrder {
    const Rank& rank;
    std::size_t position(SymId s) const {
        const auto& v = rank.independents();
        return static_cast<std::size_t>(std::find(v.begin(), v.end(), s) - v.begin());
    }
    bool less(Atom a, Atom b) const {
        if (a.order() != b.order()) return a.order() < b.order();
        auto pa = position(a.function()->name);
        auto pb = position(b.function()->name);
        if (pa != pb) return pa < pb;
        const auto& args = a.function()->args;
        std::vector<std::size_t> idx(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t x, std::size_t y) { return position(args[x]) > position(args[y]); });
        for (std::size_t i : idx) {
            if (a.alpha()[i] != b.alpha()[i]) return a.alpha()[i] < b.alpha()[i];
        }
        return false;
    }
};

bool related(Atom a, Atom b) {
    if (a.function() != b.function()) return false;
    bool ge = true;
    bool le = true;
    for (std::size_t i = 0; i < a.alpha().size(); ++i) {
        ge = ge && a.alpha()[i] >= b.alpha()[i];
        le = le && a.alpha()[i] <= b.alpha()[i];
    }
    return ge || le;
}

} // namespace

DeterminingSystem classical_determining(const PDESystem& pde, const Rank& rank) {
    if (pde.equations.empty()) throw UsageError("the problem has no equations");
    DeterminingSystem sys;
    sys.kind = GeneratorKind::Classical;
    sys.ring = determining_ring(pde, rank, GeneratorKind::Classical);
    sys.generator = make_generator(pde, GeneratorKind::Classical);
    VarSpace space = jet_space(pde, sys.generator);
    for (const auto& eq : pde.equations) sys.eliminations.push_back(Binding{eq.pivot, Fraction(eq.rhs)});
    for (std::size_t i = 0; i < pde.equations.size(); ++i) {
        Expr crit = apply_prolongation(pde.residual(i), pde, sys.generator);
        Fraction on_shell = substitute(crit, sys.eliminations, space);
        collect_into(sys, on_shell.as_polynomial(), i);
    }
    sys.raw = std::move(sys.polys);
    sys.polys.clear();
    Chain chain = wu_chain(bodies_of(sys.raw), sys.ring);
    for (const auto& m : chain.members()) {
        auto same = std::find_if(sys.raw.begin(), sys.raw.end(), [&](const DeterminingPoly& p) {
            return proportional(p.body, m.body());
        });
        if (same != sys.raw.end()) {
            sys.polys.push_back(DeterminingPoly{m.body(), same->equation, same->jets});
            continue;
        }
        auto lead = std::find_if(sys.raw.begin(), sys.raw.end(), [&](const DeterminingPoly& p) {
            return leader_of(p.body, sys.ring->rank) == m.leader();
        });
        if (lead == sys.raw.end()) lead = sys.raw.begin();
        sys.polys.push_back(DeterminingPoly{m.body(), lead->equation, lead->jets, true});
    }
    return sys;
}

DeterminingSystem nonclassical_determining(const PDESystem& pde, const Rank& rank,
                                           std::size_t normalized) {
    if (pde.equations.empty()) throw UsageError("the problem has no equations");
    if (normalized != 0) {
        throw UnimplementedBranchError("only the regular branch (first infinitesimal = 1) is implemented");
    }
    DeterminingSystem sys;
    sys.kind = GeneratorKind::Nonclassical;
    sys.ring = determining_ring(pde, rank, GeneratorKind::Nonclassical);
    sys.generator = make_generator(pde, GeneratorKind::Nonclassical);
    const Generator& gen = sys.generator;
    VarSpace space = jet_space(pde, gen);
    const auto& xs = pde.space.independents();
    const auto& deps = pde.space.dependents();

    // Invariant surface: u^a_{x1} = eta_a - sum_{i>=2} xi_i u^a_{xi}.
    std::vector<Atom> pivots;
    for (std::size_t a = 0; a < deps.size(); ++a) {
        FunctionRef fn = deps[a];
        std::vector<std::uint16_t> e1(xs.size(), 0);
        e1[0] = 1;
        Atom target = Atom::deriv(fn, e1);
        Expr value = gen.eta[a];
        for (std::size_t i = 1; i < xs.size(); ++i) {
            std::vector<std::uint16_t> ei(xs.size(), 0);
            ei[i] = 1;
            value -= gen.xi[i] * Expr(Atom::deriv(fn, ei));
        }
        sys.eliminations.push_back(Binding{target, Fraction(value)});
        pivots.push_back(target);
    }

    // Re-solve each equation on the surface for a fresh pivot, taking the
    // equation with the highest available pivot first.
    JetOrder order{sys.ring->rank};
    std::vector<bool> done(pde.equations.size(), false);
    for (std::size_t round = 0; round < pde.equations.size(); ++round) {
        std::size_t best_eq = 0;
        Atom best;
        Expr best_poly;
        for (std::size_t i = 0; i < pde.equations.size(); ++i) {
            if (done[i]) continue;
            Fraction reduced = substitute(pde.residual(i), sys.eliminations, space);
            const Expr& poly = reduced.num();
            for (Atom a : poly.atoms()) {
                if (!is_jet(a) || poly.degree(a) != 1) continue;
                const auto coeff_atoms = poly.coefficient(a, 1).atoms();
                bool clean = std::none_of(coeff_atoms.begin(), coeff_atoms.end(), is_jet);
                if (!clean) continue;
                bool free = std::none_of(pivots.begin(), pivots.end(),
                                         [&](Atom p) { return related(a, p); });
                if (!free) continue;
                if (!best || order.less(best, a)) {
                    best = a;
                    best_eq = i;
                    best_poly = poly;
                }
            }
        }
        if (!best) {
            throw SolvedFormError("cannot solve the equations on the invariant surface");
        }
        Expr c = best_poly.coefficient(best, 1);
        Expr rest = best_poly - c * Expr(best);
        sys.eliminations.push_back(Binding{best, Fraction(-rest) / Fraction(c)});
        pivots.push_back(best);
        done[best_eq] = true;
    }

    for (std::size_t i = 0; i < pde.equations.size(); ++i) {
        Expr crit = apply_prolongation(pde.residual(i), pde, gen);
        Fraction on_shell = substitute(crit, sys.eliminations, space);
        std::set<Atom> nonzero;
        for (const auto& [f, k] : on_shell.den()) {
            if (auto atoms = f.atoms(); atoms.size() == 1 && f == Expr(atoms.front())) {
                nonzero.insert(atoms.front());
            }
        }
        collect_into(sys, on_shell.num(), i, nonzero);
    }
    return sys;
}

} // namespace symchain
