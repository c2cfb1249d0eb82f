#include "symchain/substitute.hpp"

#include "symchain/errors.hpp"

#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace symchain {

namespace {

struct Match {
    const Binding* binding = nullptr;
    // Set when the atom is a proper derivative of the target: the atom is
    // D_{arg}(prev).
    Atom prev;
    SymId arg = 0;
};

class Substituter {
public:
    Substituter(const std::vector<Binding>& b, const VarSpace& s, bool c)
        : bindings_(b), space_(s), consequences_(c) {}

    Fraction apply(const Fraction& f) {
        Fraction out = eval(f.num());
        for (const auto& [g, e] : f.den()) {
            Fraction sg = eval(g);
            if (sg.is_zero()) throw DivisionByZeroError("substitution makes a denominator vanish");
            out /= pow(sg, e);
        }
        return out;
    }

private:
    std::optional<Match> match(Atom a) const {
        for (const auto& b : bindings_) {
            Atom t = b.target;
            if (t == a) return Match{&b, Atom(), 0};
            if (!consequences_ || !a.is_deriv()) continue;
            FunctionRef fn = a.function();
            std::vector<std::uint16_t> beta;
            if (t.is_symbol()) {
                if (fn->kind != FunctionKind::Dependent || fn->name != t.name()) continue;
                beta.assign(fn->args.size(), 0);
            } else if (t.is_deriv() && t.function() == fn) {
                beta = t.alpha();
            } else {
                continue;
            }
            const auto& gamma = a.alpha();
            bool ge = true;
            for (std::size_t i = 0; i < gamma.size(); ++i) ge = ge && gamma[i] >= beta[i];
            if (!ge) continue;
            for (std::size_t j = 0; j < gamma.size(); ++j) {
                if (gamma[j] > beta[j]) {
                    auto prev = gamma;
                    prev[j] -= 1;
                    return Match{&b, Atom::deriv(fn, std::move(prev)), fn->args[j]};
                }
            }
        }
        return std::nullopt;
    }

    bool touched(Atom a) {
        auto it = touched_.find(a);
        if (it != touched_.end()) return it->second;
        bool r = false;
        if (a.is_func()) {
            for (const auto& t : a.arg().terms()) {
                for (const auto& [b, p] : t.mono.powers()) r = r || touched(b);
            }
        } else if (match(a)) {
            r = true;
        } else if (a.is_deriv() && a.function()->kind != FunctionKind::Dependent) {
            for (SymId s : a.function()->args) {
                for (const auto& b : bindings_) {
                    if (b.target.is_symbol() && b.target.name() == s) {
                        throw SubstitutionError("cannot substitute into the argument of " +
                                                name_of(a.function()->name));
                    }
                }
            }
        }
        touched_.emplace(a, r);
        return r;
    }

    const Fraction& full(Atom a) {
        auto it = memo_.find(a);
        if (it != memo_.end()) return it->second;
        if (!active_.insert(a).second) {
            std::ostringstream os;
            os << "substitution cycle through " << a;
            throw SubstitutionCycleError(os.str());
        }
        Fraction result;
        if (a.is_func()) {
            Fraction arg = eval(a.arg());
            result = Fraction(make_closed(a.closed(), arg.as_polynomial()));
        } else {
            Match m = *match(a);
            if (!m.prev) {
                result = apply(m.binding->value);
            } else {
                Fraction base = full(m.prev);
                result = apply(total_derivative(base, m.arg, space_));
            }
        }
        active_.erase(a);
        return memo_.emplace(a, std::move(result)).first->second;
    }

    Fraction eval(const Expr& e) {
        bool any = false;
        for (const auto& t : e.terms()) {
            for (const auto& [a, p] : t.mono.powers()) any = any || touched(a);
        }
        if (!any) return Fraction(e);

        // Per term: untouched monomial part times a product of replacement
        // fractions. Accumulate over a common denominator built once.
        struct Part {
            Rational coeff;
            Monomial keep;
            std::vector<std::pair<const Fraction*, std::uint32_t>> reps;
        };
        std::vector<Part> parts;
        std::vector<Fraction::Factor> common;
        for (const auto& t : e.terms()) {
            Part part{t.coeff, {}, {}};
            std::vector<Power> keep;
            std::vector<Fraction::Factor> own;
            for (const auto& [a, p] : t.mono.powers()) {
                if (!touched(a)) {
                    keep.emplace_back(a, p);
                    continue;
                }
                const Fraction& r = full(a);
                part.reps.emplace_back(&r, p);
                for (const auto& [g, k] : r.den()) {
                    bool found = false;
                    for (auto& [h, m] : own) {
                        if (h == g) {
                            m += k * p;
                            found = true;
                        }
                    }
                    if (!found) own.emplace_back(g, k * p);
                }
            }
            part.keep = Monomial::from_powers(std::move(keep));
            common = lcm_factors(common, own);
            parts.push_back(std::move(part));
        }
        Expr num;
        for (const auto& part : parts) {
            Expr x(part.keep, part.coeff);
            std::vector<Fraction::Factor> own;
            for (const auto& [r, p] : part.reps) {
                x = x * pow(r->num(), p);
                for (const auto& [g, k] : r->den()) {
                    bool found = false;
                    for (auto& [h, m] : own) {
                        if (h == g) {
                            m += k * p;
                            found = true;
                        }
                    }
                    if (!found) own.emplace_back(g, k * p);
                }
                if (x.is_zero()) break;
            }
            if (x.is_zero()) continue;
            num += x * cofactor(common, own);
        }
        return Fraction::from_parts(num, common);
    }

    const std::vector<Binding>& bindings_;
    const VarSpace& space_;
    bool consequences_;
    std::unordered_map<Atom, Fraction, AtomHash> memo_;
    std::unordered_map<Atom, bool, AtomHash> touched_;
    std::unordered_set<Atom, AtomHash> active_;
};

} // namespace

Fraction substitute(const Fraction& e, const std::vector<Binding>& bindings,
                    const VarSpace& space, bool consequences) {
    Substituter s(bindings, space, consequences);
    return s.apply(e);
}

Fraction substitute(const Expr& e, const std::vector<Binding>& bindings, const VarSpace& space,
                    bool consequences) {
    return substitute(Fraction(e), bindings, space, consequences);
}

} // namespace symchain
