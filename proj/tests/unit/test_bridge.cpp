#include <doctest.h>

#include "support.hpp"

#include "symchain/errors.hpp"

using namespace symchain;
using namespace symchain::testing;

namespace {

struct Loaded {
    Problem pb;
    BridgeResult br;
};

Loaded bridge_of(const std::string& stem) {
    Problem pb = corpus(stem);
    BridgeResult br = build_bridge(pb.pde, *pb.rank);
    return {std::move(pb), std::move(br)};
}

const Candidate& find(const Problem& pb, const std::string& name) { return pb.candidate(name); }

} // namespace

TEST_CASE("bridge of the Burgers-Huxley equation") {
    auto [pb, br] = bridge_of("burgers_huxley");
    const auto& space = br.ring->space;

    SetMatch dpp = match_sets(parse_all({"taup_t - 2*xip_x", "taup_x", "taup_u"}, br.classical.ring->space),
                              br.dpp.bodies());
    CHECK(dpp.ok());
    CHECK(br.cprime.size() == 7);

    // xi_u, eta_uu, the cross condition and the last nonclassical polynomial.
    SetMatch c = match_sets(
        parse_all({"xi_u", "eta_uu", "2*eta_xu + xi_t + 2*xi*xi_x - xi_xx",
                   "2*eta*sigma*u - eta*sigma - 3*eta*u^2 + 2*eta*u + 2*eta*xi_x + eta_t - eta_u*sigma*u^2 + "
                   "eta_u*sigma*u + eta_u*u^3 - eta_u*u^2 - eta_xx + 2*sigma*u^2*xi_x - 2*sigma*u*xi_x - "
                   "2*u^3*xi_x + 2*u^2*xi_x"},
                  space),
        br.c.bodies());
    CHECK(c.ok());
    CHECK(same_up_to_constant(br.is_c, Expr(2)));
    CHECK(same_up_to_constant(br.is_cprime, Expr(2)));

    REQUIRE(br.identities.size() == br.nonclassical.bodies().size());
    for (const auto& cert : br.identities) {
        CHECK(cert.remainder.is_zero());
        CHECK(cert.multiplier.is_constant());
        CHECK(verify_certificate(cert, br.c));
    }
}

TEST_CASE("bridge of the generalized Burgers equation") {
    auto [pb, br] = bridge_of("generalized_burgers");
    SetMatch c = match_sets(
        parse_all({"f(u)*eta_u + g(u)*eta_x - eta_xx + eta_t + 2*(eta - f(u))*xi_x - eta*f_u(u)",
                   "2*eta_xu - xi_xx + (2*xi - g(u))*xi_x - eta*g_u(u) + xi_t", "eta_uu", "xi_u"},
                  br.ring->space),
        br.c.bodies());
    CHECK(c.ok());
    CHECK(same_up_to_constant(br.is_c, Expr(2)));
    for (const auto& cert : br.identities) CHECK(verify_certificate(cert, br.c));
}

TEST_CASE("an identity with a nonzero remainder is reported") {
    auto [pb, br] = bridge_of("generalized_burgers");
    auto d = br.nonclassical.bodies();
    CHECK_NOTHROW(identities(d, br.c));
    d[1] = d[1] + parse_polynomial("eta*xi", br.ring->space);
    CHECK_THROWS_AS(identities(d, br.c), NonzeroRemainderError);
}

TEST_CASE("identities of the coupled KdV system") {
    auto [pb, br] = bridge_of("kdv_system");
    CHECK(br.c.size() == 9);
    CHECK(br.identities.size() == 11);
    for (const auto& cert : br.identities) {
        CHECK(cert.remainder.is_zero());
        CHECK(verify_certificate(cert, br.c));
    }
}

TEST_CASE("triviality verdicts") {
    auto [pb, br] = bridge_of("burgers_huxley");
    std::vector<std::string> names = pb.pde.infinitesimal_names();

    auto tx = triviality_test(as_nonclassical(find(pb, "translation-tx"), names), br);
    CHECK(tx.verdict == Verdict::ClassicalEquivalent);
    REQUIRE(tx.xi1.has_value());

    auto tan = triviality_test(find(pb, "tan-witness"), br);
    CHECK(tan.verdict == Verdict::Nontrivial);
    CHECK_FALSE(tan.witness.is_zero());

    auto [pm, bm] = bridge_of("burgers_huxley_minus");
    CHECK(triviality_test(find(pm, "nonclassical"), bm).verdict == Verdict::Nontrivial);
}

TEST_CASE("inclusion audit") {
    auto [pb, br] = bridge_of("burgers_huxley");
    std::vector<AuditEntry> audit;
    REQUIRE_NOTHROW(audit = inclusion_audit(br, pb.candidates));
    REQUIRE(audit.size() == pb.candidates.size());
    for (const auto& e : audit) {
        CAPTURE(e.candidate);
        if (e.candidate == "translation-x") {
            CHECK_FALSE(e.normalizable);
        } else if (e.candidate == "translation-t" || e.candidate == "translation-tx") {
            CHECK(e.in_cprime);
            CHECK(e.in_c);
            CHECK(e.in_d);
        } else if (e.candidate == "tan-witness") {
            CHECK(e.in_c);
            CHECK(e.in_d);
        }
    }

    auto [pm, bm] = bridge_of("burgers_huxley_minus");
    auto minus = inclusion_audit(bm, pm.candidates);
    REQUIRE(minus.size() == 1);
    CHECK(minus[0].in_d);
    CHECK_FALSE(minus[0].in_c);
}
