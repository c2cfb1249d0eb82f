#pragma once

// Canonical polynomial expressions over interned atoms.
//
// An Expr is a sorted sum of terms, each a rational coefficient times a
// monomial in atoms. Atoms are hash-consed: two structurally equal atoms are
// the same pointer, so atom equality is pointer equality while atom ordering is
// structural (and therefore independent of interning history).
//
// Normal forms are closed under the built-in rewrite rules:
//   * a parameter carrying a monic side relation s^d + ... = 0 never appears
//     with exponent >= d;
//   * sech(a)^2 -> 1 - tanh(a)^2 and csch(a)^2 -> coth(a)^2 - 1;
//   * all exp atoms of a monomial fold into a single exp(sum of arguments).

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symchain {

using Rational = mpq_class;

// ---------------------------------------------------------------------------
// Symbols

using SymId = std::uint32_t;

SymId intern(std::string_view name);
const std::string& name_of(SymId id);

// ---------------------------------------------------------------------------
// Function declarations

enum class FunctionKind : std::uint8_t {
    Dependent, // a PDE dependent variable u(x1..xp); jets u_alpha
    Unknown,   // an infinitesimal to be determined, e.g. xi(t,x,u)
    Opaque,    // an arbitrary given function, e.g. f(u)
};

struct FunctionDecl {
    SymId name;
    std::vector<SymId> args;
    FunctionKind kind;
};

// Interned; the same (name, args, kind) yields the same pointer.
using FunctionRef = const FunctionDecl*;
FunctionRef declare_function(SymId name, std::vector<SymId> args, FunctionKind kind);

enum class ClosedFn : std::uint8_t { Exp, Tan, Tanh, Coth, Sech, Csch };

std::string_view closed_fn_name(ClosedFn fn);
std::optional<ClosedFn> closed_fn_from_name(std::string_view name);

// ---------------------------------------------------------------------------
// Atoms

class Expr;
struct AtomNode;

class Atom {
public:
    enum class Kind : std::uint8_t { Symbol, Deriv, Func };

    Atom() = default;

    // A plain symbol; `relation` holds the coefficients c0..c_{d-1} of a monic
    // side relation s^d + c_{d-1}s^{d-1} + ... + c0 = 0 (empty: none).
    static Atom symbol(SymId name, std::vector<Rational> relation = {});
    // D^alpha fn, alpha aligned with fn->args. A zero alpha on a Dependent
    // collapses to the plain symbol of the same name.
    static Atom deriv(FunctionRef fn, std::vector<std::uint16_t> alpha);
    static Atom func(ClosedFn fn, const Expr& arg);

    Kind kind() const;
    SymId name() const;                             // Symbol
    const std::vector<Rational>& relation() const;  // Symbol
    FunctionRef function() const;                   // Deriv
    const std::vector<std::uint16_t>& alpha() const; // Deriv
    unsigned order() const;                         // Deriv: |alpha|
    ClosedFn closed() const;                        // Func
    const Expr& arg() const;                        // Func

    bool is_symbol() const { return kind() == Kind::Symbol; }
    bool is_deriv() const { return kind() == Kind::Deriv; }
    bool is_func() const { return kind() == Kind::Func; }

    const AtomNode* node() const { return node_; }
    explicit operator bool() const { return node_ != nullptr; }

    friend bool operator==(Atom a, Atom b) { return a.node_ == b.node_; }
    friend std::strong_ordering operator<=>(Atom a, Atom b);

private:
    explicit Atom(const AtomNode* n) : node_(n) {}
    const AtomNode* node_ = nullptr;
};

struct AtomHash {
    std::size_t operator()(Atom a) const noexcept {
        return std::hash<const void*>{}(a.node());
    }
};

// ---------------------------------------------------------------------------
// Monomials and terms

using Power = std::pair<Atom, std::uint32_t>;

class Monomial {
public:
    Monomial() = default;
    explicit Monomial(Atom a, std::uint32_t p = 1);
    // `powers` need not be sorted; zero powers are dropped and equal atoms merged.
    static Monomial from_powers(std::vector<Power> powers);

    const std::vector<Power>& powers() const { return powers_; }
    bool is_one() const { return powers_.empty(); }
    std::uint32_t total_degree() const;
    std::uint32_t degree(Atom a) const;
    Monomial without(Atom a) const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial&, const Monomial&) = default;
    // Graded: total degree first, then lexicographic on the sorted powers.
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

private:
    std::vector<Power> powers_; // sorted by atom, exponents > 0
};

struct Term {
    Monomial mono;
    Rational coeff;
};

// ---------------------------------------------------------------------------
// Expr

class Expr {
public:
    Expr() = default;
    Expr(int c);
    Expr(const Rational& c);
    explicit Expr(Atom a);
    explicit Expr(const Monomial& m, const Rational& c = 1);
    // Builds a normal form from arbitrary (unsorted, uncombined, unrewritten) terms.
    static Expr from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::optional<Rational> constant_value() const;
    std::size_t size() const { return terms_.size(); }

    // Distinct atoms of the top-level monomials, sorted.
    std::vector<Atom> atoms() const;
    // Same, but also descending into closed-function arguments.
    std::vector<Atom> atoms_deep() const;
    bool contains(Atom a) const;

    std::uint32_t degree(Atom a) const;
    // Coefficient of a^k (an Expr free of a).
    Expr coefficient(Atom a, std::uint32_t k) const;

    Expr operator-() const;
    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    Expr& operator*=(const Expr& o);
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator*(const Expr& a, const Expr& b);
    Expr scaled(const Rational& c) const;

    friend bool operator==(const Expr& a, const Expr& b);
    friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

    std::size_t hash() const;

private:
    std::vector<Term> terms_; // sorted descending by monomial, nonzero coefficients
};

Expr pow(const Expr& base, unsigned k);

// Rational content (positive gcd of numerators over lcm of denominators, sign
// chosen so the leading term of the quotient is positive) and primitive part.
std::pair<Rational, Expr> primitive(const Expr& e);
// Largest monomial dividing every term (restricted to atoms accepted by `keep`).
Monomial monomial_content(const Expr& e, const std::function<bool(Atom)>& keep);
// Exact division by a monomial that divides every term.
Expr divide_monomial(const Expr& e, const Monomial& m);
// a / b when b divides a exactly (as polynomials in the atoms), else nullopt.
std::optional<Expr> exact_quotient(const Expr& a, const Expr& b);
// True when b is a nonzero rational multiple of a.
bool proportional(const Expr& a, const Expr& b);

// Closed-function application with the special values exp(0)=1, sech(0)=1,
// tan(0)=tanh(0)=0; coth(0) and csch(0) raise DivisionByZeroError.
Expr make_closed(ClosedFn fn, const Expr& arg);

// Derivative rule of a closed function: f'(a) as an Expr in the atom f(a)
// (and its companion atom, e.g. tanh for sech).
Expr closed_fn_derivative(ClosedFn fn, const Expr& arg);

std::ostream& operator<<(std::ostream& os, const Expr& e);
std::ostream& operator<<(std::ostream& os, Atom a);

} // namespace symchain
