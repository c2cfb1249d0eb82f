#include "symchain/calculus.hpp"

#include "symchain/errors.hpp"

#include <unordered_map>

namespace symchain {

Expr apply_derivation(const Expr& e, const std::function<Expr(Atom)>& rule) {
    std::unordered_map<Atom, Expr, AtomHash> cache;
    auto d = [&](Atom a) -> const Expr& {
        auto it = cache.find(a);
        if (it == cache.end()) it = cache.emplace(a, rule(a)).first;
        return it->second;
    };
    std::vector<Term> raw;
    for (const auto& t : e.terms()) {
        const auto& ps = t.mono.powers();
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const Expr& da = d(ps[i].first);
            if (da.is_zero()) continue;
            std::vector<Power> rest = ps;
            rest[i].second -= 1;
            Monomial base = Monomial::from_powers(std::move(rest));
            Rational c = t.coeff * ps[i].second;
            for (const auto& dt : da.terms()) raw.push_back(Term{base * dt.mono, c * dt.coeff});
        }
    }
    return Expr::from_terms(std::move(raw));
}

Fraction apply_derivation(const Fraction& f, const std::function<Expr(Atom)>& rule) {
    if (f.is_polynomial()) return Fraction(apply_derivation(f.num(), rule));
    // D(N / prod fi^ei) = (D(N) prod_S fi - N sum_S ei D(fi) prod_{S, j!=i} fj)
    //                     / prod fi^ei prod_S fi, S = factors with D(fi) != 0.
    std::vector<std::pair<std::size_t, Expr>> moving;
    for (std::size_t i = 0; i < f.den().size(); ++i) {
        Expr dfi = apply_derivation(f.den()[i].first, rule);
        if (!dfi.is_zero()) moving.emplace_back(i, std::move(dfi));
    }
    Expr dn = apply_derivation(f.num(), rule);
    if (moving.empty()) {
        Fraction out(dn);
        for (const auto& [g, e] : f.den()) out *= pow(Fraction::inverse(g), e);
        return out;
    }
    Expr all(1);
    for (const auto& [i, dfi] : moving) all *= f.den()[i].first;
    Expr num = dn * all;
    for (std::size_t k = 0; k < moving.size(); ++k) {
        Expr others(1);
        for (std::size_t j = 0; j < moving.size(); ++j) {
            if (j != k) others *= f.den()[moving[j].first].first;
        }
        const auto& [i, dfi] = moving[k];
        num -= f.num() * dfi * others.scaled(Rational(f.den()[i].second));
    }
    std::vector<Fraction::Factor> den = f.den();
    for (const auto& [i, dfi] : moving) den[i].second += 1;
    Fraction out(num);
    for (const auto& [g, e] : den) out *= pow(Fraction::inverse(g), e);
    return out;
}

namespace {

Expr total_rule(Atom a, SymId x, const VarSpace& space) {
    switch (a.kind()) {
    case Atom::Kind::Symbol: return space.symbol_derivative(a.name(), x);
    case Atom::Kind::Deriv: {
        FunctionRef fn = a.function();
        Expr out;
        for (std::size_t j = 0; j < fn->args.size(); ++j) {
            Expr darg = space.symbol_derivative(fn->args[j], x);
            if (darg.is_zero()) continue;
            auto beta = a.alpha();
            beta[j] += 1;
            out += Expr(Atom::deriv(fn, std::move(beta))) * darg;
        }
        return out;
    }
    case Atom::Kind::Func: {
        Expr darg = total_derivative(a.arg(), x, space);
        if (darg.is_zero()) return Expr();
        return closed_fn_derivative(a.closed(), a.arg()) * darg;
    }
    }
    return Expr();
}

} // namespace

Expr total_derivative(const Expr& e, SymId x, const VarSpace& space) {
    return apply_derivation(e, [&](Atom a) { return total_rule(a, x, space); });
}

Fraction total_derivative(const Fraction& f, SymId x, const VarSpace& space) {
    return apply_derivation(f, [&](Atom a) { return total_rule(a, x, space); });
}

Expr total_derivative(const Expr& e, const std::vector<std::uint16_t>& alpha,
                      const VarSpace& space) {
    Expr out = e;
    const auto& xs = space.independents();
    for (std::size_t i = 0; i < alpha.size() && i < xs.size(); ++i) {
        for (unsigned k = 0; k < alpha[i]; ++k) out = total_derivative(out, xs[i], space);
    }
    return out;
}

Fraction total_derivative(const Fraction& f, const std::vector<std::uint16_t>& alpha,
                          const VarSpace& space) {
    Fraction out = f;
    const auto& xs = space.independents();
    for (std::size_t i = 0; i < alpha.size() && i < xs.size(); ++i) {
        for (unsigned k = 0; k < alpha[i]; ++k) out = total_derivative(out, xs[i], space);
    }
    return out;
}

namespace {

Expr partial_rule(Atom a, Atom wrt) {
    if (a == wrt) return Expr(1);
    switch (a.kind()) {
    case Atom::Kind::Symbol: return Expr();
    case Atom::Kind::Deriv: {
        FunctionRef fn = a.function();
        if (fn->kind == FunctionKind::Dependent || !wrt.is_symbol()) return Expr();
        Expr out;
        for (std::size_t j = 0; j < fn->args.size(); ++j) {
            if (fn->args[j] != wrt.name()) continue;
            auto beta = a.alpha();
            beta[j] += 1;
            out += Expr(Atom::deriv(fn, std::move(beta)));
        }
        return out;
    }
    case Atom::Kind::Func: {
        Expr darg = partial_derivative(a.arg(), wrt);
        if (darg.is_zero()) return Expr();
        return closed_fn_derivative(a.closed(), a.arg()) * darg;
    }
    }
    return Expr();
}

} // namespace

Expr partial_derivative(const Expr& e, Atom wrt) {
    return apply_derivation(e, [&](Atom a) { return partial_rule(a, wrt); });
}

std::vector<std::pair<Monomial, Expr>> collect_coefficients(
    const Expr& e, const std::function<bool(Atom)>& is_var) {
    std::map<Monomial, std::vector<Term>> groups;
    for (const auto& t : e.terms()) {
        std::vector<Power> vars;
        std::vector<Power> rest;
        for (const auto& pw : t.mono.powers()) (is_var(pw.first) ? vars : rest).push_back(pw);
        groups[Monomial::from_powers(std::move(vars))].push_back(
            Term{Monomial::from_powers(std::move(rest)), t.coeff});
    }
    std::vector<std::pair<Monomial, Expr>> out;
    for (auto& [m, ts] : groups) {
        Expr c = Expr::from_terms(std::move(ts));
        if (!c.is_zero()) out.emplace_back(m, std::move(c));
    }
    return out;
}

} // namespace symchain
