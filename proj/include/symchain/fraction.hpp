#pragma once

#include "symchain/expr.hpp"

#include <utility>
#include <vector>

namespace symchain {

// A quotient num / (f1^e1 * ... * fk^ek) with a factored denominator.
//
// Denominator factors are non-constant primitive Exprs (leading coefficient
// positive); single-term factors are split into their atoms. Atoms that are
// invertible inside the normal form (parameters with a side relation with
// nonzero constant term, exp atoms) never appear in a denominator. Factors are
// never cancelled against the numerator: zero-testing only needs num == 0, and
// every denominator factor is assumed nonzero.
class Fraction {
public:
    using Factor = std::pair<Expr, unsigned>;

    Fraction() = default;
    Fraction(const Expr& num) : num_(num) {}
    Fraction(int c) : num_(c) {}
    Fraction(const Rational& c) : num_(c) {}

    static Fraction inverse(const Expr& e);

    const Expr& num() const { return num_; }
    const std::vector<Factor>& den() const { return den_; }
    Expr den_product() const;

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }
    // The numerator when the denominator is trivial; SubstitutionError otherwise.
    const Expr& as_polynomial() const;

    Fraction operator-() const;
    Fraction& operator+=(const Fraction& o);
    Fraction& operator-=(const Fraction& o);
    Fraction& operator*=(const Fraction& o);
    Fraction& operator/=(const Fraction& o);
    friend Fraction operator+(Fraction a, const Fraction& b) { return a += b; }
    friend Fraction operator-(Fraction a, const Fraction& b) { return a -= b; }
    friend Fraction operator*(Fraction a, const Fraction& b) { return a *= b; }
    friend Fraction operator/(Fraction a, const Fraction& b) { return a /= b; }

    // Exact equality of the represented rational functions (cross-multiplied).
    bool equals(const Fraction& o) const;

    static Fraction from_parts(Expr num, std::vector<Factor> den);

private:
    Expr num_;
    std::vector<Factor> den_; // sorted by factor, exponents > 0
};

Fraction pow(const Fraction& base, unsigned k);

// Least common multiple of two factored denominators (max exponents).
std::vector<Fraction::Factor> lcm_factors(const std::vector<Fraction::Factor>& a,
                                          const std::vector<Fraction::Factor>& b);
// Product of f^(target exponent - own exponent) over `target`.
Expr cofactor(const std::vector<Fraction::Factor>& target,
              const std::vector<Fraction::Factor>& own);

std::ostream& operator<<(std::ostream& os, const Fraction& f);

} // namespace symchain
