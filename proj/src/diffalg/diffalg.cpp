#include "symchain/diffalg.hpp"

#include "symchain/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace symchain {

// ---------------------------------------------------------------------------
// Rank

Rank::Rank(std::vector<SymId> independents, std::vector<SymId> unknowns, RankScheme scheme)
    : independents_(std::move(independents)), unknowns_(std::move(unknowns)), scheme_(scheme) {
    auto dup = [](std::vector<SymId> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) != v.end();
    };
    if (dup(independents_) || dup(unknowns_)) throw RankError("rank lists a name twice");
}

std::optional<std::size_t> Rank::unknown_index(SymId name) const {
    auto it = std::find(unknowns_.begin(), unknowns_.end(), name);
    if (it == unknowns_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - unknowns_.begin());
}

bool Rank::is_ranked(Atom a) const {
    return a.is_deriv() && a.function()->kind == FunctionKind::Unknown &&
           unknown_index(a.function()->name).has_value();
}

std::vector<std::uint16_t> Rank::full_alpha(Atom a) const {
    std::vector<std::uint16_t> out(independents_.size(), 0);
    FunctionRef fn = a.function();
    for (std::size_t j = 0; j < fn->args.size(); ++j) {
        if (a.alpha()[j] == 0) continue;
        auto it = std::find(independents_.begin(), independents_.end(), fn->args[j]);
        if (it == independents_.end()) {
            throw RankError("rank does not order the independent " + name_of(fn->args[j]));
        }
        out[static_cast<std::size_t>(it - independents_.begin())] = a.alpha()[j];
    }
    return out;
}

std::strong_ordering Rank::compare(Atom a, Atom b) const {
    if (a == b) return std::strong_ordering::equal;
    bool ra = is_ranked(a);
    bool rb = is_ranked(b);
    if (ra != rb) return ra ? std::strong_ordering::greater : std::strong_ordering::less;
    if (!ra) return a <=> b;
    auto ua = *unknown_index(a.function()->name);
    auto ub = *unknown_index(b.function()->name);
    auto fa = full_alpha(a);
    auto fb = full_alpha(b);
    auto lex = [&]() {
        for (std::size_t i = fa.size(); i-- > 0;) {
            if (auto c = fa[i] <=> fb[i]; c != 0) return c;
        }
        return std::strong_ordering::equal;
    };
    if (scheme_ == RankScheme::Lex) {
        if (auto c = lex(); c != 0) return c;
        if (auto c = ua <=> ub; c != 0) return c;
        return a <=> b;
    }
    if (auto c = a.order() <=> b.order(); c != 0) return c;
    if (auto c = ua <=> ub; c != 0) return c;
    if (auto c = lex(); c != 0) return c;
    // Same unknown name with different declarations only.
    return a <=> b;
}

bool Rank::is_derivative_of(Atom a, Atom b, std::vector<std::uint16_t>* delta) const {
    if (!a.is_deriv() || !b.is_deriv() || a.function() != b.function()) return false;
    const auto& x = a.alpha();
    const auto& y = b.alpha();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < y[i]) return false;
    }
    if (delta) {
        auto fa = full_alpha(a);
        auto fb = full_alpha(b);
        delta->resize(fa.size());
        for (std::size_t i = 0; i < fa.size(); ++i) (*delta)[i] = fa[i] - fb[i];
    }
    return true;
}

std::string Rank::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < independents_.size(); ++i) {
        os << (i ? "<" : "") << name_of(independents_[i]);
    }
    os << " ; ";
    for (std::size_t i = 0; i < unknowns_.size(); ++i) {
        os << (i ? "<" : "") << name_of(unknowns_[i]);
    }
    if (scheme_ == RankScheme::Lex) os << " ; lex";
    return os.str();
}

// ---------------------------------------------------------------------------
// DiffPoly

Atom leader_of(const Expr& e, const Rank& rank) {
    Atom best;
    for (Atom a : e.atoms()) {
        if (!rank.is_ranked(a)) continue;
        if (!best || rank.less(best, a)) best = a;
    }
    return best;
}

DiffPoly::DiffPoly(Expr body, RingRef ring) : body_(std::move(body)), ring_(std::move(ring)) {
    leader_ = leader_of(body_, ring_->rank);
    if (leader_) {
        degree_ = body_.degree(leader_);
        initial_ = body_.coefficient(leader_, degree_);
        separant_ = partial_derivative(body_, leader_);
    }
}

namespace {

std::string show(const Expr& e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

} // namespace

Atom DiffPoly::leader() const {
    if (!leader_) throw DegenerateError("no unknown derivative in " + show(body_));
    return leader_;
}

std::uint32_t DiffPoly::degree() const {
    leader();
    return degree_;
}

const Expr& DiffPoly::initial() const {
    leader();
    return initial_;
}

const Expr& DiffPoly::separant() const {
    leader();
    return separant_;
}

bool is_reduced(const Expr& f, const DiffPoly& g) {
    Atom lead = g.leader();
    const Rank& rank = g.ring()->rank;
    for (Atom a : f.atoms()) {
        if (a != lead && rank.is_derivative_of(a, lead)) return false;
    }
    return f.degree(lead) < g.degree();
}

std::strong_ordering compare_polys(const DiffPoly& a, const DiffPoly& b) {
    if (a.is_degenerate() || b.is_degenerate()) {
        return !a.is_degenerate() <=> !b.is_degenerate();
    }
    if (auto c = a.ring()->rank.compare(a.leader(), b.leader()); c != 0) return c;
    return a.degree() <=> b.degree();
}

// ---------------------------------------------------------------------------
// Chain

Chain::Chain(std::vector<Expr> members, RingRef ring) : ring_(std::move(ring)) {
    for (auto& m : members) {
        DiffPoly p(std::move(m), ring_);
        if (p.is_degenerate()) throw ChainError("degenerate chain member " + show(p.body()));
        members_.push_back(std::move(p));
    }
    std::stable_sort(members_.begin(), members_.end(),
                     [](const DiffPoly& a, const DiffPoly& b) { return compare_polys(a, b) < 0; });
    for (std::size_t j = 0; j < members_.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (members_[i].leader() == members_[j].leader() ||
                !is_reduced(members_[j].body(), members_[i])) {
                throw ChainError("not an ascending chain: " + show(members_[j].body()) +
                                 " is not reduced with respect to " + show(members_[i].body()));
            }
        }
    }
}

std::vector<Expr> Chain::bodies() const {
    std::vector<Expr> out;
    for (const auto& m : members_) out.push_back(m.body());
    return out;
}

Expr Chain::is_product() const {
    Expr p(1);
    for (const auto& m : members_) {
        p *= m.initial();
        if (!(m.separant() == m.initial())) p *= m.separant();
    }
    return p;
}

Expr Chain::derived_member(std::size_t i, const std::vector<std::uint16_t>& beta) const {
    Expr e = members_.at(i).body();
    const auto& xs = ring_->rank.independents();
    for (std::size_t k = 0; k < beta.size(); ++k) {
        for (unsigned n = 0; n < beta[k]; ++n) e = total_derivative(e, xs[k], ring_->space);
    }
    return e;
}

bool is_chain(const std::vector<Expr>& polys, const RingRef& ring) {
    try {
        Chain c(polys, ring);
        return true;
    } catch (const ChainError&) {
        return false;
    } catch (const DegenerateError&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// prem

namespace {

void add_term(std::vector<CertificateTerm>& terms, std::size_t i,
              const std::vector<std::uint16_t>& beta, const Expr& q) {
    for (auto& t : terms) {
        if (t.member == i && t.beta == beta) {
            t.coeff += q;
            return;
        }
    }
    terms.push_back(CertificateTerm{i, beta, q});
}

unsigned weight(const std::vector<std::uint16_t>& v) {
    unsigned s = 0;
    for (auto x : v) s += x;
    return s;
}

} // namespace

ReductionCertificate prem(const Expr& f, const Chain& chain) {
    ReductionCertificate cert;
    cert.input = f;
    cert.multiplier = Expr(1);
    Expr r = f;
    const Rank& rank = chain.ring()->rank;
    const auto& members = chain.members();
    const std::size_t zero_len = rank.independents().size();
    std::map<std::pair<std::size_t, std::vector<std::uint16_t>>, Expr> derived;

    while (!r.is_zero()) {
        std::vector<Atom> ranked;
        for (Atom a : r.atoms()) {
            if (rank.is_ranked(a)) ranked.push_back(a);
        }
        std::sort(ranked.begin(), ranked.end(), [&](Atom a, Atom b) { return rank.less(b, a); });

        // Highest offending derivative and the member that eliminates it.
        Atom v;
        std::size_t member = 0;
        std::vector<std::uint16_t> delta;
        for (Atom a : ranked) {
            unsigned best = ~0u;
            for (std::size_t i = 0; i < members.size(); ++i) {
                std::vector<std::uint16_t> d;
                if (!rank.is_derivative_of(a, members[i].leader(), &d)) continue;
                unsigned w = weight(d);
                if (w == 0 && r.degree(a) < members[i].degree()) continue;
                if (w < best) {
                    best = w;
                    member = i;
                    delta = std::move(d);
                }
            }
            if (best != ~0u) {
                v = a;
                break;
            }
        }
        if (!v) break;

        const bool proper = weight(delta) > 0;
        auto key = std::make_pair(member, delta);
        auto cached = derived.find(key);
        if (cached == derived.end()) {
            cached = derived
                         .emplace(key, proper ? chain.derived_member(member, delta)
                                              : members[member].body())
                         .first;
        }
        const Expr& g = cached->second;
        const std::uint32_t e = proper ? 1 : members[member].degree();
        const Expr mult = proper ? g.coefficient(v, 1) : members[member].initial();
        if (proper && g.degree(v) != 1) {
            throw InternalError("derivative of a chain member is not linear in its leader");
        }
        const std::vector<std::uint16_t> beta = proper ? delta
                                                       : std::vector<std::uint16_t>(zero_len, 0);
        const auto unit = mult.constant_value();

        while (r.degree(v) >= e) {
            const std::uint32_t k = r.degree(v);
            Expr q = r.coefficient(v, k) * Expr(Monomial(v, k - e));
            if (unit) {
                q = q.scaled(1 / *unit);
                r -= q * g;
            } else {
                r = mult * r - q * g;
                for (auto& t : cert.terms) t.coeff = mult * t.coeff;
                cert.multiplier = mult * cert.multiplier;
            }
            add_term(cert.terms, member, beta, q);
        }
    }
    std::erase_if(cert.terms, [](const CertificateTerm& t) { return t.coeff.is_zero(); });
    std::sort(cert.terms.begin(), cert.terms.end(), [](const auto& a, const auto& b) {
        if (a.member != b.member) return a.member < b.member;
        return a.beta < b.beta;
    });
    cert.remainder = r;
    return cert;
}

bool verify_certificate(const ReductionCertificate& cert, const Chain& chain) {
    Expr rhs = cert.remainder;
    for (const auto& t : cert.terms) rhs += t.coeff * chain.derived_member(t.member, t.beta);
    return cert.multiplier * cert.input == rhs;
}

// ---------------------------------------------------------------------------
// Wu's algorithm

Expr content_free(const Expr& e, const DiffRing& ring) {
    if (e.is_zero()) return e;
    Monomial m = monomial_content(e, [&](Atom a) {
        return (a.is_symbol() && ring.space.is_independent(a.name())) ||
               (a.is_func() && a.closed() == ClosedFn::Exp);
    });
    return primitive(divide_monomial(e, m)).second;
}

namespace {

struct Candidate {
    DiffPoly poly;
    std::size_t index;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
    if (auto c = compare_polys(a.poly, b.poly); c != 0) return c < 0;
    if (a.poly.body().size() != b.poly.body().size()) {
        return a.poly.body().size() < b.poly.body().size();
    }
    if (auto c = a.poly.body() <=> b.poly.body(); c != 0) return c < 0;
    return a.index < b.index;
}

} // namespace

std::vector<Expr> basic_set(const std::vector<Expr>& polys, const RingRef& ring) {
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        DiffPoly p(polys[i], ring);
        if (p.is_degenerate()) continue;
        cands.push_back(Candidate{std::move(p), i});
    }
    std::sort(cands.begin(), cands.end(), candidate_less);
    std::vector<DiffPoly> chosen;
    for (const auto& c : cands) {
        bool ok = true;
        for (const auto& b : chosen) {
            if (c.poly.leader() == b.leader() || !is_reduced(c.poly.body(), b)) {
                ok = false;
                break;
            }
        }
        if (ok) chosen.push_back(c.poly);
    }
    std::vector<Expr> out;
    for (const auto& p : chosen) out.push_back(p.body());
    return out;
}

namespace {

Chain plain_wu(const std::vector<Expr>& system, const RingRef& ring) {
    std::vector<Expr> pool;
    auto adjoin = [&](const Expr& e) {
        Expr c = content_free(e, *ring);
        if (c.is_zero()) return false;
        if (!leader_of(c, ring->rank)) {
            throw InconsistentSystemError("base-field contradiction: " + show(c) + " = 0");
        }
        if (std::find(pool.begin(), pool.end(), c) != pool.end()) return false;
        pool.push_back(std::move(c));
        return true;
    };
    for (const auto& e : system) adjoin(e);
    if (pool.empty()) throw ChainError("wu_chain needs a nonzero polynomial");

    while (true) {
        Chain chain(basic_set(pool, ring), ring);
        std::vector<Expr> remainders;
        for (const auto& p : pool) {
            Expr r = prem(p, chain).remainder;
            if (!r.is_zero()) remainders.push_back(std::move(r));
        }
        if (remainders.empty()) return chain;
        bool grew = false;
        for (const auto& r : remainders) grew = adjoin(r) || grew;
        if (!grew) throw InternalError("wu_chain: reduced remainder already in the pool");
    }
}

// The generic-component variant. Remainders are computed without
// certificates, cleaned after every elimination step and abandoned once they
// outgrow `cap` terms; the cap doubles whenever nothing else is left.
class GenericWu {
public:
    GenericWu(const RingRef& ring, bool coherent) : ring_(ring), coherent_(coherent) {}

    Chain run(const std::vector<Expr>& system) {
        for (const auto& e : system) {
            Expr c = clean(e);
            if (!c.is_zero() && std::find(pool_.begin(), pool_.end(), c) == pool_.end()) {
                check_consistent(c);
                pool_.push_back(std::move(c));
            }
        }
        if (pool_.empty()) throw ChainError("wu_chain needs a nonzero polynomial");
        std::size_t cap = 256;
        while (true) {
            Chain chain(basic_set(pool_, ring_), ring_);
            learn_initials(chain);
            bool aborted = false;
            std::optional<Expr> best;
            for (const auto& p : pool_) consider(reduce(p, chain, cap), best, aborted);
            if (!best && !aborted && coherent_) {
                for (const auto& d : cross_conditions(chain)) consider(reduce(d, chain, cap), best, aborted);
            }
            if (best) {
                check_consistent(*best);
                pool_.push_back(std::move(*best));
                continue;
            }
            if (!aborted) return chain;
            if (cap > (std::size_t{1} << 22)) throw InternalError("wu_chain: expression swell");
            cap *= 2;
        }
    }

private:
    void check_consistent(const Expr& c) const {
        if (!leader_of(c, ring_->rank)) {
            throw InconsistentSystemError("base-field contradiction: " + show(c) + " = 0");
        }
    }

    Expr clean(Expr e) const {
        if (e.is_zero()) return e;
        e = content_free(e, *ring_);
        const Rank& rank = ring_->rank;
        e = divide_monomial(e, monomial_content(e, [&](Atom a) {
                                return rank.is_ranked(a) && a.order() == 0;
                            }));
        for (bool again = true; again;) {
            again = false;
            for (const auto& f : factors_) {
                if (f.size() > e.size()) continue;
                if (auto q = exact_quotient(e, f)) {
                    e = std::move(*q);
                    again = true;
                }
            }
        }
        return primitive(e).second;
    }

    void learn_initials(const Chain& chain) {
        for (const auto& m : chain.members()) {
            Expr i = clean(m.initial());
            if (i.size() > 1 && std::find(factors_.begin(), factors_.end(), i) == factors_.end()) {
                factors_.push_back(std::move(i));
            }
        }
    }

    std::optional<Expr> reduce(const Expr& f, const Chain& chain, std::size_t cap) const {
        const Rank& rank = ring_->rank;
        const auto& members = chain.members();
        Expr r = f;
        while (!r.is_zero()) {
            std::vector<Atom> ranked;
            for (Atom a : r.atoms()) {
                if (rank.is_ranked(a)) ranked.push_back(a);
            }
            std::sort(ranked.begin(), ranked.end(), [&](Atom a, Atom b) { return rank.less(b, a); });
            Atom v;
            std::size_t member = 0;
            std::vector<std::uint16_t> delta;
            for (Atom a : ranked) {
                unsigned best = ~0u;
                for (std::size_t i = 0; i < members.size(); ++i) {
                    std::vector<std::uint16_t> d;
                    if (!rank.is_derivative_of(a, members[i].leader(), &d)) continue;
                    unsigned w = weight(d);
                    if (w == 0 && r.degree(a) < members[i].degree()) continue;
                    if (w < best) {
                        best = w;
                        member = i;
                        delta = std::move(d);
                    }
                }
                if (best != ~0u) {
                    v = a;
                    break;
                }
            }
            if (!v) break;
            const bool proper = weight(delta) > 0;
            const Expr g = proper ? chain.derived_member(member, delta) : members[member].body();
            const std::uint32_t e = proper ? 1 : members[member].degree();
            const Expr mult = proper ? g.coefficient(v, 1) : members[member].initial();
            const auto unit = mult.constant_value();
            while (r.degree(v) >= e) {
                Expr q = r.coefficient(v, r.degree(v)) * Expr(Monomial(v, r.degree(v) - e));
                if (unit) {
                    r -= q.scaled(1 / *unit) * g;
                } else {
                    r = mult * r - q * g;
                }
            }
            r = clean(std::move(r));
            if (r.size() > cap) return std::nullopt;
        }
        return r;
    }

    void consider(std::optional<Expr> r, std::optional<Expr>& best, bool& aborted) const {
        if (!r) {
            aborted = true;
            return;
        }
        if (r->is_zero() || std::find(pool_.begin(), pool_.end(), *r) != pool_.end()) return;
        if (!leader_of(*r, ring_->rank)) {
            best = std::move(r);
            return;
        }
        if (best && !leader_of(*best, ring_->rank)) return;
        if (best) {
            auto c = compare_polys(DiffPoly(*r, ring_), DiffPoly(*best, ring_));
            if (c > 0 || (c == 0 && r->size() >= best->size())) return;
        }
        best = std::move(r);
    }

    std::vector<Expr> cross_conditions(const Chain& chain) const {
        std::vector<Expr> out;
        const auto& ms = chain.members();
        const std::size_t n = ring_->rank.independents().size();
        for (std::size_t i = 0; i < ms.size(); ++i) {
            for (std::size_t j = i + 1; j < ms.size(); ++j) {
                if (ms[i].leader().function() != ms[j].leader().function()) continue;
                auto ai = ring_->rank.full_alpha(ms[i].leader());
                auto aj = ring_->rank.full_alpha(ms[j].leader());
                std::vector<std::uint16_t> di(n), dj(n);
                for (std::size_t k = 0; k < n; ++k) {
                    auto m = std::max(ai[k], aj[k]);
                    di[k] = static_cast<std::uint16_t>(m - ai[k]);
                    dj[k] = static_cast<std::uint16_t>(m - aj[k]);
                }
                if (weight(di) == 0 || weight(dj) == 0) continue;
                Expr gi = chain.derived_member(i, di);
                Expr gj = chain.derived_member(j, dj);
                Atom top = leader_of(gi, ring_->rank);
                out.push_back(clean(gj.coefficient(top, 1) * gi - gi.coefficient(top, 1) * gj));
            }
        }
        return out;
    }

    RingRef ring_;
    bool coherent_;
    std::vector<Expr> pool_;
    std::vector<Expr> factors_;
};

} // namespace

Chain wu_chain(const std::vector<Expr>& system, const RingRef& ring, const WuOptions& options) {
    if (!options.generic && !options.coherent) return plain_wu(system, ring);
    return GenericWu(ring, options.coherent).run(system);
}

} // namespace symchain
