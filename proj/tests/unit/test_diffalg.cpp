#include <doctest.h>

#include "symchain/diffalg.hpp"
#include "symchain/errors.hpp"

#include <sstream>

using namespace symchain;

namespace {

// z = (t, x, u); unknowns xi < eta < tau, all functions of z.
RingRef level2_ring() {
    auto ring = std::make_shared<DiffRing>();
    for (const char* z : {"t", "x", "u"}) ring->space.add_independent(z);
    for (const char* f : {"xi", "eta", "tau"}) {
        ring->space.add_function(f, {"t", "x", "u"}, FunctionKind::Unknown);
    }
    ring->rank = Rank({intern("t"), intern("x"), intern("u")},
                      {intern("xi"), intern("eta"), intern("tau")});
    return ring;
}

// d(name, "xu") -> the atom name_xu
Expr d(const RingRef& ring, const char* name, const char* suffix = "") {
    FunctionRef fn = ring->space.function(intern(name));
    std::vector<std::uint16_t> alpha(fn->args.size(), 0);
    for (const char* c = suffix; *c; ++c) {
        for (std::size_t j = 0; j < fn->args.size(); ++j) {
            if (name_of(fn->args[j]) == std::string(1, *c)) alpha[j] += 1;
        }
    }
    return Expr(Atom::deriv(fn, alpha));
}

std::string str(Atom a) {
    std::ostringstream os;
    os << a;
    return os.str();
}

} // namespace

TEST_CASE("leader, initial, separant") {
    auto R = level2_ring();
    Expr u(R->space.atom_of("u"));
    Expr xi = d(R, "xi");
    DiffPoly p(d(R, "eta", "uu") - d(R, "xi", "xu").scaled(2) + (xi * d(R, "xi", "u")).scaled(2), R);
    CHECK(str(p.leader()) == "eta_uu");
    CHECK(p.initial() == Expr(1));
    CHECK(p.separant() == Expr(1));

    DiffPoly q(u * pow(d(R, "xi", "x"), 2) + 1, R);
    CHECK(str(q.leader()) == "xi_x");
    CHECK(q.initial() == u);
    CHECK(q.separant() == (u * d(R, "xi", "x")).scaled(2));

    DiffPoly deg(u + 1, R);
    CHECK(deg.is_degenerate());
    CHECK_THROWS_AS(deg.leader(), DegenerateError);
}

TEST_CASE("graded rank orders first derivatives and second derivatives") {
    auto R = level2_ring();
    auto lead = [&](const Expr& a) { return leader_of(a, R->rank); };
    const Rank& rk = R->rank;
    CHECK(rk.less(lead(d(R, "tau", "t")), lead(d(R, "tau", "x"))));
    CHECK(rk.less(lead(d(R, "tau", "x")), lead(d(R, "tau", "u"))));
    CHECK(rk.less(lead(d(R, "eta", "xx")), lead(d(R, "eta", "xu"))));
    CHECK(rk.less(lead(d(R, "eta", "xu")), lead(d(R, "eta", "uu"))));
    CHECK(rk.less(lead(d(R, "xi", "x")), lead(d(R, "tau", "t"))));
}

TEST_CASE("is_reduced") {
    auto R = level2_ring();
    DiffPoly g(d(R, "eta", "uu"), R);
    CHECK(is_reduced(d(R, "xi", "u"), g));
    CHECK_FALSE(is_reduced(d(R, "eta", "uuu"), g));
    CHECK_FALSE(is_reduced(pow(d(R, "eta", "uu"), 2), g));
}

TEST_CASE("prem with a quadratic input") {
    auto R = level2_ring();
    Expr u(R->space.atom_of("u"));
    Expr eta = d(R, "eta");
    Chain c({d(R, "xi", "u") - eta}, R);
    Expr f = u * pow(d(R, "xi", "u"), 2) + d(R, "eta", "x");
    auto cert = prem(f, c);
    CHECK(cert.remainder == u * eta * eta + d(R, "eta", "x"));
    CHECK(cert.multiplier == Expr(1));
    REQUIRE(cert.terms.size() == 1);
    CHECK(cert.terms[0].coeff == u * d(R, "xi", "u") + u * eta);
    CHECK(verify_certificate(cert, c));
}

TEST_CASE("prem of a reduced polynomial is the identity") {
    auto R = level2_ring();
    Chain c({d(R, "eta", "uu")}, R);
    auto cert = prem(d(R, "xi", "t"), c);
    CHECK(cert.remainder == d(R, "xi", "t"));
    CHECK(cert.multiplier == Expr(1));
    CHECK(cert.terms.empty());
}

TEST_CASE("is_chain") {
    auto R = level2_ring();
    CHECK_FALSE(is_chain({d(R, "eta", "uu"), d(R, "eta", "uuu")}, R));
    CHECK(is_chain({d(R, "eta", "uu") + d(R, "xi")}, R));
}

TEST_CASE("wu_chain adjoins a remainder") {
    auto R = level2_ring();
    Chain c = wu_chain({d(R, "xi", "u"), d(R, "xi", "u") + d(R, "eta", "u")}, R);
    auto b = c.bodies();
    REQUIRE(b.size() == 2);
    CHECK(b[0] == d(R, "xi", "u"));
    CHECK(b[1] == d(R, "eta", "u"));
}

TEST_CASE("wu_chain reports a base-field contradiction") {
    auto R = level2_ring();
    Expr u(R->space.atom_of("u"));
    CHECK_THROWS_AS(wu_chain({d(R, "xi"), d(R, "xi") - 1}, R), InconsistentSystemError);
}
