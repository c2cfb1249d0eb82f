#include "symchain/corpus.hpp"

#include "symchain/errors.hpp"

#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>

namespace symchain {

std::uint64_t default_seed() {
    if (const char* s = std::getenv("SYMCHAIN_SEED")) {
        char* end = nullptr;
        auto v = std::strtoull(s, &end, 10);
        if (end != s && *end == '\0') return v;
    }
    return 20240611;
}

namespace {

std::string show(const Expr& e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

// z = (t, x, u), unknowns xi < eta < tau, a parameter r2 with r2^2 = 2.
struct World {
    RingRef ring;
    std::vector<Atom> base;
    std::vector<Atom> jets;
    Atom r2;

    World() {
        auto r = std::make_shared<DiffRing>();
        for (const char* z : {"t", "x", "u"}) r->space.add_independent(z);
        for (const char* f : {"xi", "eta", "tau"}) r->space.add_function(f, {"t", "x", "u"}, FunctionKind::Unknown);
        r2 = r->space.add_parameter("r2", {Rational(-2), Rational(0)});
        r->rank = Rank({intern("t"), intern("x"), intern("u")}, {intern("xi"), intern("eta"), intern("tau")});
        for (const char* z : {"t", "x", "u"}) base.push_back(r->space.atom_of(z));
        for (FunctionRef fn : r->space.functions()) {
            for (std::uint16_t i = 0; i < 3; ++i) {
                for (std::uint16_t j = i; j < 3; ++j) {
                    std::vector<std::uint16_t> a(3, 0);
                    jets.push_back(Atom::deriv(fn, a));
                    a[i] += 1;
                    jets.push_back(Atom::deriv(fn, a));
                    a[j] += 1;
                    jets.push_back(Atom::deriv(fn, a));
                }
            }
        }
        std::sort(jets.begin(), jets.end());
        jets.erase(std::unique(jets.begin(), jets.end()), jets.end());
        ring = r;
    }
};

class Gen {
public:
    Gen(const World& w, std::uint64_t seed) : w_(w), rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Rational coeff() {
        int n = 0;
        while (n == 0) n = uniform(-4, 4);
        Rational c(n, uniform(1, 3));
        c.canonicalize();
        return uniform(0, 4) == 0 ? c : Rational(n);
    }

    Atom base_atom(bool closed) {
        if (closed && uniform(0, 5) == 0) {
            Expr arg = Expr(w_.base[uniform(0, 1)]) + Expr(w_.base[uniform(0, 2)]);
            static constexpr ClosedFn fns[] = {ClosedFn::Exp, ClosedFn::Tanh, ClosedFn::Tan, ClosedFn::Sech};
            return Atom::func(fns[uniform(0, 3)], arg);
        }
        if (uniform(0, 6) == 0) return w_.r2;
        return w_.base[uniform(0, 2)];
    }

    // Polynomial in the jets, of degree at most `deg` in them, base-field
    // coefficients of low degree.
    Expr poly(int terms, int deg, bool closed = false) {
        Expr e;
        for (int k = 0; k < terms; ++k) {
            Expr t(coeff());
            for (int b = uniform(0, 1); b > 0; --b) t *= Expr(base_atom(closed));
            for (int j = uniform(0, deg); j > 0; --j) t *= Expr(w_.jets[uniform(0, static_cast<int>(w_.jets.size()) - 1)]);
            e += t;
        }
        return e;
    }

    // An ascending chain from a few random polynomials, linear in their
    // leaders so that the chain stays small.
    Chain chain() {
        std::vector<Expr> pool;
        int n = uniform(1, 4);
        for (int i = 0; i < n; ++i) {
            Atom lead = w_.jets[uniform(0, static_cast<int>(w_.jets.size()) - 1)];
            Expr init = Expr(coeff());
            if (uniform(0, 2) == 0) init += Expr(w_.base[uniform(0, 2)]);
            pool.push_back(init * Expr(lead) + poly(uniform(0, 2), 1));
        }
        auto members = basic_set(pool, w_.ring);
        if (members.empty()) members.push_back(Expr(w_.jets.back()));
        return Chain(members, w_.ring);
    }

private:
    const World& w_;
    std::mt19937_64 rng_;
};

using Property = std::function<std::string(Gen&, const World&)>; // empty: pass

std::string certificate_identity(Gen& g, const World&) {
    Chain ch = g.chain();
    Expr f = g.poly(g.uniform(1, 4), 2);
    auto cert = prem(f, ch);
    if (!verify_certificate(cert, ch)) return "identity fails for " + show(f);
    return {};
}

std::string remainder_reduced(Gen& g, const World&) {
    Chain ch = g.chain();
    Expr f = g.poly(g.uniform(1, 4), 2);
    Expr r = prem(f, ch).remainder;
    for (const auto& m : ch.members()) {
        if (!is_reduced(r, m)) return show(r) + " is not reduced with respect to " + show(m.body());
    }
    return {};
}

std::string prem_idempotent(Gen& g, const World&) {
    Chain ch = g.chain();
    Expr r = prem(g.poly(g.uniform(1, 4), 2), ch).remainder;
    auto again = prem(r, ch);
    if (again.remainder != r || again.multiplier != Expr(1)) return "prem moves the remainder " + show(r);
    return {};
}

std::string derivatives_commute(Gen& g, const World& w) {
    Expr f = g.poly(g.uniform(1, 4), 2, true);
    const VarSpace& vs = w.ring->space;
    SymId a = vs.independents()[g.uniform(0, 2)];
    SymId b = vs.independents()[g.uniform(0, 2)];
    Expr ab = total_derivative(total_derivative(f, a, vs), b, vs);
    Expr ba = total_derivative(total_derivative(f, b, vs), a, vs);
    if (ab != ba) return "mixed derivatives differ on " + show(f);
    return {};
}

std::string leibniz(Gen& g, const World& w) {
    Expr f = g.poly(g.uniform(1, 3), 2, true);
    Expr h = g.poly(g.uniform(1, 3), 2, true);
    const VarSpace& vs = w.ring->space;
    SymId x = vs.independents()[g.uniform(0, 2)];
    Expr lhs = total_derivative(f * h, x, vs);
    Expr rhs = total_derivative(f, x, vs) * h + f * total_derivative(h, x, vs);
    if (lhs != rhs) return "Leibniz rule fails on " + show(f) + " and " + show(h);
    return {};
}

std::string normalize_idempotent(Gen& g, const World&) {
    Expr f = g.poly(g.uniform(1, 4), 2, true) * g.poly(g.uniform(1, 3), 1, true);
    if (Expr::from_terms(f.terms()) != f) return "renormalizing changes " + show(f);
    return {};
}

std::string wu_postcondition(Gen& g, const World& w) {
    std::vector<Expr> sys;
    int n = g.uniform(1, 3);
    for (int i = 0; i < n; ++i) sys.push_back(g.poly(g.uniform(1, 3), g.uniform(0, 4) == 0 ? 2 : 1));
    try {
        Chain ch = wu_chain(sys, w.ring);
        for (const auto& p : sys) {
            if (!prem(p, ch).remainder.is_zero()) return show(p) + " does not reduce to zero";
        }
    } catch (const InconsistentSystemError&) {
        // a base-field contradiction is a legitimate outcome
    } catch (const ChainError&) {
        // all inputs zero or degenerate
    }
    return {};
}

} // namespace

std::vector<PropertyResult> run_properties(std::uint64_t seed, std::size_t cases) {
    static const World world;
    const std::pair<const char*, Property> props[] = {
        {"certificate identity", certificate_identity},
        {"remainder reducedness", remainder_reduced},
        {"prem idempotence", prem_idempotent},
        {"commuting total derivatives", derivatives_commute},
        {"Leibniz rule", leibniz},
        {"normal form idempotence", normalize_idempotent},
        {"wu_chain postcondition", wu_postcondition},
    };
    std::vector<PropertyResult> out;
    std::uint64_t k = 0;
    for (const auto& [name, prop] : props) {
        PropertyResult res;
        res.name = name;
        Gen g(world, seed + 7919 * ++k);
        for (std::size_t i = 0; i < cases; ++i) {
            std::string failure;
            try {
                failure = prop(g, world);
            } catch (const std::exception& e) {
                failure = std::string("exception: ") + e.what();
            }
            ++res.cases;
            if (!failure.empty()) {
                if (res.failures++ == 0) res.first_failure = failure;
            }
        }
        out.push_back(std::move(res));
    }
    return out;
}

} // namespace symchain
