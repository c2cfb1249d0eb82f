#include <doctest.h>

#include "symchain/calculus.hpp"
#include "symchain/errors.hpp"
#include "symchain/substitute.hpp"

#include <sstream>

using namespace symchain;

namespace {

std::string str(const Expr& e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

std::string str(const Fraction& e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

VarSpace jet_space() {
    VarSpace vs;
    vs.add_independent("t");
    vs.add_independent("x");
    vs.add_dependent("u");
    vs.add_function("xi", {"t", "x", "u"}, FunctionKind::Unknown);
    return vs;
}

} // namespace

TEST_CASE("terms combine and cancel") {
    VarSpace vs = jet_space();
    Expr u(vs.atom_of("u"));
    Expr x(vs.atom_of("x"));
    Expr e = (u + x) * (u - x);
    CHECK(e == u * u - x * x);
    CHECK((e - e).is_zero());
    CHECK(str(pow(u + 1, 2)) == "u^2 + 2*u + 1");
}

TEST_CASE("parameter side relation reduces powers") {
    VarSpace vs;
    Atom r = vs.add_parameter("r2", {Rational(-2), Rational(0)});
    Expr s(r);
    CHECK(s * s == Expr(2));
    CHECK(pow(s, 3) == s.scaled(2));
    Fraction inv = Fraction::inverse(s);
    CHECK(inv.is_polynomial());
    CHECK(inv.num() == s.scaled(Rational(1, 2)));
}

TEST_CASE("closed function rewrite rules") {
    VarSpace vs = jet_space();
    Expr x(vs.atom_of("x"));
    Expr sech = make_closed(ClosedFn::Sech, x);
    Expr tanh = make_closed(ClosedFn::Tanh, x);
    CHECK(sech * sech == Expr(1) - tanh * tanh);
    Expr e1 = make_closed(ClosedFn::Exp, x);
    Expr e2 = make_closed(ClosedFn::Exp, -x);
    CHECK(e1 * e2 == Expr(1));
    CHECK(make_closed(ClosedFn::Exp, Expr()) == Expr(1));
    CHECK_THROWS_AS(make_closed(ClosedFn::Coth, Expr()), DivisionByZeroError);
}

TEST_CASE("total derivative on jets and unknowns") {
    VarSpace vs = jet_space();
    SymId x = intern("x");
    Expr u(vs.atom_of("u"));
    Expr xi(vs.atom_of("xi"));
    CHECK(str(total_derivative(u * u, x, vs)) == "2*u*u_x");
    CHECK(str(total_derivative(xi, x, vs)) == "u_x*xi_u + xi_x");
    Expr th = make_closed(ClosedFn::Tanh, Expr(vs.atom_of("x")));
    CHECK(total_derivative(th, x, vs) == Expr(1) - th * th);
}

TEST_CASE("fraction derivative") {
    VarSpace vs = jet_space();
    SymId x = intern("x");
    Expr xe(vs.atom_of("x"));
    Fraction f = Fraction(Expr(1)) / Fraction(xe + 1);
    Fraction df = total_derivative(f, x, vs);
    CHECK(df.equals(Fraction(Expr(-1)) / Fraction(pow(xe + 1, 2))));
}

TEST_CASE("substitution with consequences") {
    VarSpace vs = jet_space();
    Atom u = vs.atom_of("u");
    Expr xe(vs.atom_of("x"));
    FunctionRef ufn = vs.dependent(intern("u"));
    Atom uxx = Atom::deriv(ufn, {0, 2});
    std::vector<Binding> b{{u, Fraction(xe * xe * xe)}};
    CHECK(substitute(Expr(uxx), b, vs).num() == xe.scaled(6));
    std::vector<Binding> cyc{{u, Fraction(Expr(u) + 1)}};
    CHECK_THROWS_AS(substitute(Expr(u), cyc, vs), SubstitutionCycleError);
}
