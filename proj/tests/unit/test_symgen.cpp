#include <doctest.h>

#include "support.hpp"

using namespace symchain;
using namespace symchain::testing;

// Reference systems below were computed independently (sympy, characteristic
// form of the prolongation) and pasted in the problem-file grammar.

namespace {

const std::vector<std::string> kHuxleyClassicalRaw = {
    "xip_uu",
    "taup_uu",
    "-etap_uu - 4*sigma*taup_u*u + 2*sigma*taup_u - sigma*taup_uu*u^2 + sigma*taup_uu*u + 6*taup_u*u^2 - "
    "4*taup_u*u + taup_uu*u^3 - taup_uu*u^2 + 2*xip_xu",
    "2*taup_xu + 2*xip_u",
    "2*taup_u",
    "-2*etap_xu - 4*sigma*taup_x*u + 2*sigma*taup_x - 2*sigma*taup_xu*u^2 + 2*sigma*taup_xu*u + "
    "sigma*u^2*xip_u - sigma*u*xip_u + 6*taup_x*u^2 - 4*taup_x*u + 2*taup_xu*u^3 - 2*taup_xu*u^2 - "
    "u^3*xip_u + u^2*xip_u - xip_t + xip_xx",
    "sigma*taup_u*u^2 - sigma*taup_u*u - taup_t - taup_u*u^3 + taup_u*u^2 + taup_xx + 2*xip_x",
    "2*taup_x",
    "2*etap*sigma*u - etap*sigma - 3*etap*u^2 + 2*etap*u + etap_t - etap_u*sigma*u^2 + etap_u*sigma*u + "
    "etap_u*u^3 - etap_u*u^2 - etap_xx - sigma^2*taup_u*u^4 + 2*sigma^2*taup_u*u^3 - sigma^2*taup_u*u^2 + "
    "sigma*taup_t*u^2 - sigma*taup_t*u + 2*sigma*taup_u*u^5 - 4*sigma*taup_u*u^4 + 2*sigma*taup_u*u^3 - "
    "sigma*taup_xx*u^2 + sigma*taup_xx*u - taup_t*u^3 + taup_t*u^2 - taup_u*u^6 + 2*taup_u*u^5 - "
    "taup_u*u^4 + taup_xx*u^3 - taup_xx*u^2",
};

const std::vector<std::string> kBurgersClassicalRaw = {
    "-2*g_u(u)*taup_u - taup_uu*g(u) + xip_uu",
    "taup_uu",
    "-etap_uu + 2*f_u(u)*taup_u - 2*g_u(u)*taup_x + taup_uu*f(u) - 2*taup_xu*g(u) + 2*xip_xu",
    "-2*taup_u*g(u) + 2*taup_xu + 2*xip_u",
    "2*taup_u",
    "etap*g_u(u) - 2*etap_xu + 2*f_u(u)*taup_x + taup_t*g(u) + taup_u*f(u)*g(u) + taup_x*g(u)^2 + "
    "2*taup_xu*f(u) - taup_xx*g(u) - xip_t - xip_u*f(u) - xip_x*g(u) + xip_xx",
    "-taup_t - taup_u*f(u) - 3*taup_x*g(u) + taup_xx + 2*xip_x",
    "2*taup_x",
    "-etap*f_u(u) + etap_t + etap_u*f(u) + etap_x*g(u) - etap_xx - taup_t*f(u) - taup_u*f(u)^2 - "
    "taup_x*f(u)*g(u) + taup_xx*f(u)",
};

const std::vector<std::string> kHuxleyNonclassical = {
    "xi_uu",
    "-eta_uu - 2*xi*xi_u + 2*xi_xu",
    "2*eta*xi_u - 2*eta_xu + 3*sigma*u^2*xi_u - 3*sigma*u*xi_u - 3*u^3*xi_u + 3*u^2*xi_u - 2*xi*xi_x - "
    "xi_t + xi_xx",
    "2*eta*sigma*u - eta*sigma - 3*eta*u^2 + 2*eta*u + 2*eta*xi_x + eta_t - eta_u*sigma*u^2 + "
    "eta_u*sigma*u + eta_u*u^3 - eta_u*u^2 - eta_xx + 2*sigma*u^2*xi_x - 2*sigma*u*xi_x - 2*u^3*xi_x + "
    "2*u^2*xi_x",
};

const std::vector<std::string> kBurgersNonclassical = {
    "xi_uu",
    "-eta_uu - 2*xi*xi_u + 2*xi_u*g(u) + 2*xi_xu",
    "eta*g_u(u) + 2*eta*xi_u - 2*eta_xu - 2*xi*xi_x - xi_t - 3*xi_u*f(u) + xi_x*g(u) + xi_xx",
    "-eta*f_u(u) + 2*eta*xi_x + eta_t + eta_u*f(u) + eta_x*g(u) - eta_xx - 2*xi_x*f(u)",
};

// The classical system of the coupled KdV-type equations as printed.
const std::vector<std::string> kKdvClassical = {
    "taup_v", "taup_u", "taup_x", "3*etap + 2*u*taup_t",
    "etap_v", "etap_x", "etap_t", "etap - u*etap_u", "u*phip - v*etap",
    "xip_v", "xip_u", "xip_t", "etap + 2*u*xip_x",
};

void check_classical(const std::string& stem, const std::vector<std::string>& raw_text) {
    Problem pb = corpus(stem);
    DeterminingSystem d = classical_determining(pb.pde, *pb.rank);
    auto raw = parse_all(raw_text, d.ring->space);
    Chain dprime(d.bodies(), d.ring);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        CAPTURE(raw_text[i]);
        CHECK(prem(raw[i], dprime).remainder.is_zero());
    }
    SetMatch m = match_sets(wu_chain(raw, d.ring).bodies(), d.bodies());
    CHECK(m.ok());
}

void check_nonclassical(const std::string& stem, const std::vector<std::string>& text) {
    Problem pb = corpus(stem);
    DeterminingSystem d = nonclassical_determining(pb.pde, *pb.rank);
    SetMatch m = match_sets(parse_all(text, d.ring->space), d.bodies());
    CHECK(m.missing.empty());
    CHECK(m.extra.empty());
}

} // namespace

TEST_CASE("classical system of the Burgers-Huxley equation") {
    check_classical("burgers_huxley", kHuxleyClassicalRaw);
}

TEST_CASE("classical system of the generalized Burgers equation") {
    check_classical("generalized_burgers", kBurgersClassicalRaw);
}

TEST_CASE("nonclassical system of the Burgers-Huxley equation") {
    check_nonclassical("burgers_huxley", kHuxleyNonclassical);
}

TEST_CASE("nonclassical system of the generalized Burgers equation") {
    check_nonclassical("generalized_burgers", kBurgersNonclassical);
}

TEST_CASE("coupled KdV system") {
    Problem pb = corpus("kdv_system");
    DeterminingSystem dc = classical_determining(pb.pde, *pb.rank);
    SetMatch m = match_sets(parse_all(kKdvClassical, dc.ring->space), dc.bodies());
    CHECK(m.ok());
    CHECK(dc.bodies().size() == 13);
    DeterminingSystem dn = nonclassical_determining(pb.pde, *pb.rank);
    CHECK(dn.bodies().size() == 11);
}

TEST_CASE("classical system of the heat equation") {
    Problem pb = parse_problem("independent t, x\ndependent u\ninfinitesimals tau, xi ; eta\n"
                               "equation u_t = u_xx\nrank t<x<u ; xi<eta<tau\n");
    DeterminingSystem d = classical_determining(pb.pde, *pb.rank);
    // The heat equation's classical system forces tau to depend on t alone.
    Chain c(d.bodies(), d.ring);
    for (const char* text : {"taup_u", "taup_x", "xip_u"}) {
        CAPTURE(text);
        CHECK(prem(parse_polynomial(text, d.ring->space), c).remainder.is_zero());
    }
    CHECK_FALSE(prem(parse_polynomial("taup_t", d.ring->space), c).remainder.is_zero());
}
