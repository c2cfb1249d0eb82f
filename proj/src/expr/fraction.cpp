#include "symchain/fraction.hpp"

#include "symchain/errors.hpp"

#include <algorithm>
#include <map>

namespace symchain {

namespace {

// 1/s for a parameter with monic relation s^d + c_{d-1}s^{d-1} + ... + c0 = 0.
Expr relation_inverse(Atom s) {
    const auto& rel = s.relation();
    if (rel.empty() || rel[0] == 0) {
        throw DivisionByZeroError("parameter " + name_of(s.name()) + " is not invertible");
    }
    // s * (s^{d-1} + c_{d-1}s^{d-2} + ... + c1) = -c0
    const auto d = static_cast<std::uint32_t>(rel.size());
    Expr q(Monomial(s, d - 1));
    for (std::uint32_t i = 1; i < d; ++i) q += Expr(Monomial(s, i - 1), rel[i]);
    return q.scaled(-1 / rel[0]);
}

void push_factor(std::vector<Fraction::Factor>& den, const Expr& f, unsigned e) {
    for (auto& [g, k] : den) {
        if (g == f) {
            k += e;
            return;
        }
    }
    den.emplace_back(f, e);
}

void sort_factors(std::vector<Fraction::Factor>& den) {
    std::sort(den.begin(), den.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
}

} // namespace

Fraction Fraction::inverse(const Expr& e) {
    if (e.is_zero()) throw DivisionByZeroError("division by zero");
    if (auto c = e.constant_value()) return Fraction(Rational(1 / *c));
    auto [content, prim] = primitive(e);
    Fraction out(Rational(1 / content));
    if (prim.size() == 1) {
        for (const auto& [a, p] : prim.terms().front().mono.powers()) {
            if (a.is_symbol() && !a.relation().empty()) {
                out.num_ = out.num_ * pow(relation_inverse(a), p);
            } else if (a.is_func() && a.closed() == ClosedFn::Exp) {
                out.num_ = out.num_ * make_closed(ClosedFn::Exp, a.arg().scaled(-Rational(p)));
            } else {
                push_factor(out.den_, Expr(a), p);
            }
        }
    } else {
        push_factor(out.den_, prim, 1);
    }
    sort_factors(out.den_);
    return out;
}

Fraction Fraction::from_parts(Expr num, std::vector<Factor> den) {
    Fraction out(num);
    if (num.is_zero()) return out;
    for (auto& [f, e] : den) {
        if (e == 0) continue;
        Fraction inv = inverse(f);
        out *= pow(inv, e);
    }
    return out;
}

Expr Fraction::den_product() const {
    Expr p(1);
    for (const auto& [f, e] : den_) p *= pow(f, e);
    return p;
}

const Expr& Fraction::as_polynomial() const {
    if (!den_.empty()) {
        throw SubstitutionError("expected a polynomial, got a rational expression");
    }
    return num_;
}

Fraction Fraction::operator-() const {
    Fraction f = *this;
    f.num_ = -f.num_;
    return f;
}

std::vector<Fraction::Factor> lcm_factors(const std::vector<Fraction::Factor>& a,
                                          const std::vector<Fraction::Factor>& b) {
    std::vector<Fraction::Factor> out = a;
    for (const auto& [f, e] : b) {
        bool found = false;
        for (auto& [g, k] : out) {
            if (g == f) {
                k = std::max(k, e);
                found = true;
                break;
            }
        }
        if (!found) out.emplace_back(f, e);
    }
    sort_factors(out);
    return out;
}

Expr cofactor(const std::vector<Fraction::Factor>& target,
              const std::vector<Fraction::Factor>& own) {
    Expr c(1);
    for (const auto& [f, e] : target) {
        unsigned have = 0;
        for (const auto& [g, k] : own) {
            if (g == f) have = k;
        }
        if (e > have) c *= pow(f, e - have);
    }
    return c;
}

Fraction& Fraction::operator+=(const Fraction& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        auto l = lcm_factors(den_, o.den_);
        num_ = num_ * cofactor(l, den_) + o.num_ * cofactor(l, o.den_);
        den_ = std::move(l);
    }
    if (num_.is_zero()) den_.clear();
    return *this;
}

Fraction& Fraction::operator-=(const Fraction& o) { return *this += -o; }

Fraction& Fraction::operator*=(const Fraction& o) {
    if (is_zero() || o.is_zero()) {
        num_ = Expr();
        den_.clear();
        return *this;
    }
    num_ = num_ * o.num_;
    for (const auto& [f, e] : o.den_) push_factor(den_, f, e);
    sort_factors(den_);
    return *this;
}

Fraction& Fraction::operator/=(const Fraction& o) {
    if (o.is_zero()) throw DivisionByZeroError("division by zero");
    Fraction inv = inverse(o.num_);
    inv.num_ = inv.num_ * o.den_product();
    return *this *= inv;
}

bool Fraction::equals(const Fraction& o) const {
    auto l = lcm_factors(den_, o.den_);
    return num_ * cofactor(l, den_) == o.num_ * cofactor(l, o.den_);
}

Fraction pow(const Fraction& base, unsigned k) {
    Fraction r(1);
    for (unsigned i = 0; i < k; ++i) r *= base;
    return r;
}

std::ostream& operator<<(std::ostream& os, const Fraction& f) {
    if (f.is_polynomial()) return os << f.num();
    // One division per factor, so reparsing rebuilds the same factor list.
    os << '(' << f.num() << ')';
    for (const auto& [g, e] : f.den()) {
        os << "/(" << g << ')';
        if (e > 1) os << '^' << e;
    }
    return os;
}

} // namespace symchain
