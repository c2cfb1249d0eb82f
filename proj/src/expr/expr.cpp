#include "symchain/expr.hpp"

#include "symchain/errors.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace symchain {

// ---------------------------------------------------------------------------
// Symbol table

namespace {

struct SymbolTable {
    std::mutex mu;
    std::deque<std::string> names;
    std::unordered_map<std::string, SymId> ids;
};

SymbolTable& symbols() {
    static SymbolTable t;
    return t;
}

} // namespace

SymId intern(std::string_view name) {
    auto& t = symbols();
    std::lock_guard lock(t.mu);
    auto it = t.ids.find(std::string(name));
    if (it != t.ids.end()) return it->second;
    SymId id = static_cast<SymId>(t.names.size());
    t.names.emplace_back(name);
    t.ids.emplace(std::string(name), id);
    return id;
}

const std::string& name_of(SymId id) {
    auto& t = symbols();
    std::lock_guard lock(t.mu);
    return t.names.at(id);
}

// ---------------------------------------------------------------------------
// Function declarations

namespace {

struct DeclKey {
    SymId name;
    std::vector<SymId> args;
    FunctionKind kind;
    bool operator==(const DeclKey&) const = default;
};

struct DeclKeyHash {
    std::size_t operator()(const DeclKey& k) const noexcept {
        std::size_t h = std::hash<SymId>{}(k.name) * 31 + static_cast<std::size_t>(k.kind);
        for (SymId a : k.args) h = h * 1000003u + a;
        return h;
    }
};

struct DeclTable {
    std::mutex mu;
    std::unordered_map<DeclKey, std::unique_ptr<FunctionDecl>, DeclKeyHash> decls;
};

DeclTable& decl_table() {
    static DeclTable t;
    return t;
}

int compare_names(SymId a, SymId b) {
    if (a == b) return 0;
    return name_of(a).compare(name_of(b));
}

} // namespace

FunctionRef declare_function(SymId name, std::vector<SymId> args, FunctionKind kind) {
    auto& t = decl_table();
    std::lock_guard lock(t.mu);
    DeclKey key{name, args, kind};
    auto it = t.decls.find(key);
    if (it != t.decls.end()) return it->second.get();
    auto decl = std::make_unique<FunctionDecl>(FunctionDecl{name, std::move(args), kind});
    FunctionRef ref = decl.get();
    t.decls.emplace(std::move(key), std::move(decl));
    return ref;
}

std::string_view closed_fn_name(ClosedFn fn) {
    switch (fn) {
    case ClosedFn::Exp: return "exp";
    case ClosedFn::Tan: return "tan";
    case ClosedFn::Tanh: return "tanh";
    case ClosedFn::Coth: return "coth";
    case ClosedFn::Sech: return "sech";
    case ClosedFn::Csch: return "csch";
    }
    return "?";
}

std::optional<ClosedFn> closed_fn_from_name(std::string_view name) {
    for (ClosedFn fn : {ClosedFn::Exp, ClosedFn::Tan, ClosedFn::Tanh, ClosedFn::Coth,
                        ClosedFn::Sech, ClosedFn::Csch}) {
        if (closed_fn_name(fn) == name) return fn;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Atom interning

struct AtomNode {
    Atom::Kind kind{};
    SymId name = 0;
    const std::string* name_str = nullptr;
    std::vector<Rational> relation;
    FunctionRef fn = nullptr;
    std::vector<std::uint16_t> alpha;
    unsigned order = 0;
    ClosedFn closed{};
    std::unique_ptr<Expr> arg;
    std::size_t hash = 0;
};

namespace {

std::size_t hash_rational(const Rational& q) {
    std::size_t h = static_cast<std::size_t>(mpz_get_si(q.get_num_mpz_t()));
    return h * 1000003u ^ static_cast<std::size_t>(mpz_get_si(q.get_den_mpz_t()));
}

bool same_structure(const AtomNode& a, const AtomNode& b) {
    if (a.kind != b.kind || a.hash != b.hash) return false;
    switch (a.kind) {
    case Atom::Kind::Symbol: return a.name == b.name && a.relation == b.relation;
    case Atom::Kind::Deriv: return a.fn == b.fn && a.alpha == b.alpha;
    case Atom::Kind::Func: return a.closed == b.closed && *a.arg == *b.arg;
    }
    return false;
}

struct NodePtrHash {
    std::size_t operator()(const AtomNode* n) const noexcept { return n->hash; }
};
struct NodePtrEq {
    bool operator()(const AtomNode* a, const AtomNode* b) const { return same_structure(*a, *b); }
};

struct AtomTable {
    std::mutex mu;
    std::deque<std::unique_ptr<AtomNode>> storage;
    std::unordered_set<const AtomNode*, NodePtrHash, NodePtrEq> index;
};

AtomTable& atom_table() {
    static AtomTable t;
    return t;
}

const AtomNode* intern_node(std::unique_ptr<AtomNode> node) {
    auto& t = atom_table();
    std::lock_guard lock(t.mu);
    auto it = t.index.find(node.get());
    if (it != t.index.end()) return *it;
    const AtomNode* raw = node.get();
    t.storage.push_back(std::move(node));
    t.index.insert(raw);
    return raw;
}

const std::string* stable_name(SymId id) { return &name_of(id); }

} // namespace

Atom Atom::symbol(SymId name, std::vector<Rational> relation) {
    auto n = std::make_unique<AtomNode>();
    n->kind = Kind::Symbol;
    n->name = name;
    n->name_str = stable_name(name);
    n->relation = std::move(relation);
    std::size_t h = 0x51u + name * 7919u;
    for (const auto& c : n->relation) h = h * 131u ^ hash_rational(c);
    n->hash = h;
    return Atom(intern_node(std::move(n)));
}

Atom Atom::deriv(FunctionRef fn, std::vector<std::uint16_t> alpha) {
    if (alpha.size() != fn->args.size()) {
        throw NameError("derivative index of " + name_of(fn->name) + " has wrong arity");
    }
    unsigned order = 0;
    for (auto a : alpha) order += a;
    if (order == 0 && fn->kind == FunctionKind::Dependent) return symbol(fn->name);
    auto n = std::make_unique<AtomNode>();
    n->kind = Kind::Deriv;
    n->fn = fn;
    n->name = fn->name;
    n->name_str = stable_name(fn->name);
    n->alpha = std::move(alpha);
    n->order = order;
    std::size_t h = 0x77u + std::hash<const void*>{}(fn);
    for (auto a : n->alpha) h = h * 31u + a;
    n->hash = h;
    return Atom(intern_node(std::move(n)));
}

Atom Atom::func(ClosedFn fn, const Expr& arg) {
    auto n = std::make_unique<AtomNode>();
    n->kind = Kind::Func;
    n->closed = fn;
    n->arg = std::make_unique<Expr>(arg);
    n->hash = 0x99u + static_cast<std::size_t>(fn) * 17u + arg.hash();
    return Atom(intern_node(std::move(n)));
}

Atom::Kind Atom::kind() const { return node_->kind; }
SymId Atom::name() const { return node_->name; }
const std::vector<Rational>& Atom::relation() const { return node_->relation; }
FunctionRef Atom::function() const { return node_->fn; }
const std::vector<std::uint16_t>& Atom::alpha() const { return node_->alpha; }
unsigned Atom::order() const { return node_->order; }
ClosedFn Atom::closed() const { return node_->closed; }
const Expr& Atom::arg() const { return *node_->arg; }

namespace {

std::strong_ordering cmp_rational(const Rational& a, const Rational& b) {
    int c = cmp(a, b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::strong_ordering cmp_int(int c) {
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::strong_ordering cmp_decl(FunctionRef a, FunctionRef b) {
    if (a == b) return std::strong_ordering::equal;
    if (auto c = cmp_int(compare_names(a->name, b->name)); c != 0) return c;
    if (auto c = a->kind <=> b->kind; c != 0) return c;
    if (auto c = a->args.size() <=> b->args.size(); c != 0) return c;
    for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (auto c = cmp_int(compare_names(a->args[i], b->args[i])); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

} // namespace

std::strong_ordering operator<=>(Atom a, Atom b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    const AtomNode& x = *a.node_;
    const AtomNode& y = *b.node_;
    if (auto c = x.kind <=> y.kind; c != 0) return c;
    switch (x.kind) {
    case Atom::Kind::Symbol: {
        if (auto c = cmp_int(x.name_str->compare(*y.name_str)); c != 0) return c;
        if (auto c = x.relation.size() <=> y.relation.size(); c != 0) return c;
        for (std::size_t i = 0; i < x.relation.size(); ++i) {
            if (auto c = cmp_rational(x.relation[i], y.relation[i]); c != 0) return c;
        }
        return std::strong_ordering::equal;
    }
    case Atom::Kind::Deriv: {
        if (auto c = cmp_decl(x.fn, y.fn); c != 0) return c;
        if (auto c = x.order <=> y.order; c != 0) return c;
        return x.alpha <=> y.alpha;
    }
    case Atom::Kind::Func: {
        if (auto c = x.closed <=> y.closed; c != 0) return c;
        return *x.arg <=> *y.arg;
    }
    }
    return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(Atom a, std::uint32_t p) {
    if (p > 0) powers_.emplace_back(a, p);
}

Monomial Monomial::from_powers(std::vector<Power> powers) {
    std::sort(powers.begin(), powers.end(),
              [](const Power& l, const Power& r) { return l.first < r.first; });
    Monomial m;
    for (auto& [a, p] : powers) {
        if (p == 0) continue;
        if (!m.powers_.empty() && m.powers_.back().first == a) {
            m.powers_.back().second += p;
        } else {
            m.powers_.emplace_back(a, p);
        }
    }
    return m;
}

std::uint32_t Monomial::total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [a, p] : powers_) d += p;
    return d;
}

std::uint32_t Monomial::degree(Atom a) const {
    for (const auto& [b, p] : powers_) {
        if (b == a) return p;
    }
    return 0;
}

Monomial Monomial::without(Atom a) const {
    Monomial m;
    for (const auto& pw : powers_) {
        if (pw.first != a) m.powers_.push_back(pw);
    }
    return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.powers_.reserve(a.powers_.size() + b.powers_.size());
    auto i = a.powers_.begin();
    auto j = b.powers_.begin();
    while (i != a.powers_.end() && j != b.powers_.end()) {
        if (i->first == j->first) {
            m.powers_.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        } else if (i->first < j->first) {
            m.powers_.push_back(*i++);
        } else {
            m.powers_.push_back(*j++);
        }
    }
    m.powers_.insert(m.powers_.end(), i, a.powers_.end());
    m.powers_.insert(m.powers_.end(), j, b.powers_.end());
    return m;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
    std::size_t n = std::min(a.powers_.size(), b.powers_.size());
    for (std::size_t k = 0; k < n; ++k) {
        const auto& [x, p] = a.powers_[k];
        const auto& [y, q] = b.powers_[k];
        if (x != y) return y <=> x; // earlier atoms dominate
        if (p != q) return p <=> q;
    }
    return a.powers_.size() <=> b.powers_.size();
}

// ---------------------------------------------------------------------------
// Rewrite rules

namespace {

bool needs_rewrite(const Monomial& m) {
    int exps = 0;
    for (const auto& [a, p] : m.powers()) {
        switch (a.kind()) {
        case Atom::Kind::Symbol:
            if (!a.relation().empty() && p >= a.relation().size()) return true;
            break;
        case Atom::Kind::Func:
            switch (a.closed()) {
            case ClosedFn::Sech:
            case ClosedFn::Csch:
                if (p >= 2) return true;
                break;
            case ClosedFn::Exp:
                if (p >= 2 || ++exps >= 2) return true;
                break;
            default: break;
            }
            break;
        default: break;
        }
    }
    return false;
}

Expr make_closed_impl(ClosedFn fn, const Expr& arg);

// Expands a monomial that matches a rewrite rule; the result is normal.
Expr rewrite(const Monomial& m) {
    std::vector<Power> exps;
    for (const auto& [a, p] : m.powers()) {
        if (a.is_symbol() && !a.relation().empty() && p >= a.relation().size()) {
            const auto& rel = a.relation();
            const auto d = static_cast<std::uint32_t>(rel.size());
            Expr tail;
            for (std::uint32_t i = 0; i < d; ++i) {
                tail -= Expr(Monomial(a, i), rel[i]);
            }
            std::vector<Power> rest = m.without(a).powers();
            rest.emplace_back(a, p - d);
            return Expr(Monomial::from_powers(std::move(rest))) * tail;
        }
        if (a.is_func() && (a.closed() == ClosedFn::Sech || a.closed() == ClosedFn::Csch) &&
            p >= 2) {
            std::vector<Power> rest = m.without(a).powers();
            rest.emplace_back(a, p - 2);
            Expr companion;
            if (a.closed() == ClosedFn::Sech) {
                companion = Expr(1) - pow(Expr(Atom::func(ClosedFn::Tanh, a.arg())), 2);
            } else {
                companion = pow(Expr(Atom::func(ClosedFn::Coth, a.arg())), 2) - Expr(1);
            }
            return Expr(Monomial::from_powers(std::move(rest))) * companion;
        }
        if (a.is_func() && a.closed() == ClosedFn::Exp) exps.emplace_back(a, p);
    }
    // Only the exp rule is left.
    Expr sum;
    Monomial rest = m;
    for (const auto& [a, p] : exps) {
        sum += a.arg().scaled(Rational(p));
        rest = rest.without(a);
    }
    return Expr(rest) * make_closed_impl(ClosedFn::Exp, sum);
}

Expr make_closed_impl(ClosedFn fn, const Expr& arg) {
    if (arg.is_zero()) {
        switch (fn) {
        case ClosedFn::Exp:
        case ClosedFn::Sech: return Expr(1);
        case ClosedFn::Tan:
        case ClosedFn::Tanh: return Expr();
        case ClosedFn::Coth:
        case ClosedFn::Csch:
            throw DivisionByZeroError(std::string(closed_fn_name(fn)) + "(0) is undefined");
        }
    }
    return Expr(Atom::func(fn, arg));
}

void combine_sorted(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& l, const Term& r) { return l.mono > r.mono; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i + 1;
        Rational c = terms[i].coeff;
        while (j < terms.size() && terms[j].mono == terms[i].mono) c += terms[j++].coeff;
        if (c != 0) {
            if (out != i) terms[out].mono = std::move(terms[i].mono);
            terms[out].coeff = c;
            ++out;
        }
        i = j;
    }
    terms.resize(out);
}

} // namespace

Expr make_closed(ClosedFn fn, const Expr& arg) { return make_closed_impl(fn, arg); }

// ---------------------------------------------------------------------------
// Expr

Expr::Expr(int c) {
    if (c != 0) terms_.push_back(Term{Monomial(), Rational(c)});
}

// Coefficients may arrive as mpq_class(n, d) without canonicalization.
Expr::Expr(const Rational& c) {
    Rational k = c;
    k.canonicalize();
    if (k != 0) terms_.push_back(Term{Monomial(), std::move(k)});
}

Expr::Expr(Atom a) : Expr(Monomial(a), 1) {}

Expr::Expr(const Monomial& m, const Rational& c) {
    Rational k = c;
    k.canonicalize();
    if (k == 0) return;
    if (needs_rewrite(m)) {
        *this = rewrite(m).scaled(k);
    } else {
        terms_.push_back(Term{m, std::move(k)});
    }
}

Expr Expr::from_terms(std::vector<Term> terms) {
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (t.coeff == 0) continue;
        if (needs_rewrite(t.mono)) {
            Expr r = rewrite(t.mono).scaled(t.coeff);
            for (const auto& rt : r.terms_) out.push_back(rt);
        } else {
            out.push_back(std::move(t));
        }
    }
    combine_sorted(out);
    Expr e;
    e.terms_ = std::move(out);
    return e;
}

bool Expr::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

std::optional<Rational> Expr::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_[0].mono.is_one()) return terms_[0].coeff;
    return std::nullopt;
}

std::vector<Atom> Expr::atoms() const {
    std::vector<Atom> out;
    for (const auto& t : terms_) {
        for (const auto& [a, p] : t.mono.powers()) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Atom> Expr::atoms_deep() const {
    std::vector<Atom> out;
    for (const auto& t : terms_) {
        for (const auto& [a, p] : t.mono.powers()) {
            out.push_back(a);
            if (a.is_func()) {
                auto inner = a.arg().atoms_deep();
                out.insert(out.end(), inner.begin(), inner.end());
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Expr::contains(Atom a) const {
    for (const auto& t : terms_) {
        if (t.mono.degree(a) > 0) return true;
    }
    return false;
}

std::uint32_t Expr::degree(Atom a) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree(a));
    return d;
}

Expr Expr::coefficient(Atom a, std::uint32_t k) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (t.mono.degree(a) == k) out.push_back(Term{t.mono.without(a), t.coeff});
    }
    Expr e;
    combine_sorted(out);
    e.terms_ = std::move(out);
    return e;
}

Expr Expr::operator-() const {
    Expr e = *this;
    for (auto& t : e.terms_) t.coeff = -t.coeff;
    return e;
}

Expr& Expr::operator+=(const Expr& o) {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) return *this = o;
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto i = terms_.begin();
    auto j = o.terms_.begin();
    while (i != terms_.end() && j != o.terms_.end()) {
        auto c = i->mono <=> j->mono;
        if (c == 0) {
            Rational s = i->coeff + j->coeff;
            if (s != 0) out.push_back(Term{i->mono, s});
            ++i;
            ++j;
        } else if (c > 0) {
            out.push_back(*i++);
        } else {
            out.push_back(*j++);
        }
    }
    out.insert(out.end(), i, terms_.end());
    out.insert(out.end(), j, o.terms_.end());
    terms_ = std::move(out);
    return *this;
}

Expr& Expr::operator-=(const Expr& o) { return *this += -o; }

Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }

Expr operator*(const Expr& a, const Expr& b) {
    if (a.terms_.empty() || b.terms_.empty()) return Expr();
    if (auto c = b.constant_value()) return a.scaled(*c);
    if (auto c = a.constant_value()) return b.scaled(*c);
    std::vector<Term> raw;
    raw.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) raw.push_back(Term{x.mono * y.mono, x.coeff * y.coeff});
    }
    return Expr::from_terms(std::move(raw));
}

Expr Expr::scaled(const Rational& c) const {
    if (c == 0) return Expr();
    Expr e = *this;
    for (auto& t : e.terms_) t.coeff *= c;
    return e;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].coeff != b.terms_[i].coeff) return false;
        if (!(a.terms_[i].mono == b.terms_[i].mono)) return false;
    }
    return true;
}

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
    std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto c = a.terms_[i].mono <=> b.terms_[i].mono; c != 0) return c;
        if (auto c = cmp_rational(a.terms_[i].coeff, b.terms_[i].coeff); c != 0) return c;
    }
    return a.terms_.size() <=> b.terms_.size();
}

std::size_t Expr::hash() const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (const auto& t : terms_) {
        for (const auto& [a, p] : t.mono.powers()) {
            h = (h ^ AtomHash{}(a)) * 0x100000001b3ull;
            h = (h ^ p) * 0x100000001b3ull;
        }
        h = (h ^ hash_rational(t.coeff)) * 0x100000001b3ull;
    }
    return h;
}

Expr pow(const Expr& base, unsigned k) {
    Expr result(1);
    Expr b = base;
    while (k > 0) {
        if (k & 1u) result *= b;
        k >>= 1u;
        if (k > 0) b = b * b;
    }
    return result;
}

std::pair<Rational, Expr> primitive(const Expr& e) {
    if (e.is_zero()) return {Rational(1), e};
    mpz_class num_gcd = 0;
    mpz_class den_lcm = 1;
    for (const auto& t : e.terms()) {
        mpz_class n = abs(t.coeff.get_num());
        num_gcd = gcd(num_gcd, n);
        den_lcm = lcm(den_lcm, mpz_class(t.coeff.get_den()));
    }
    Rational content(num_gcd, den_lcm);
    content.canonicalize();
    if (e.terms().front().coeff < 0) content = -content;
    Rational inv = 1 / content;
    return {content, e.scaled(inv)};
}

Monomial monomial_content(const Expr& e, const std::function<bool(Atom)>& keep) {
    if (e.is_zero()) return Monomial();
    std::vector<Power> common;
    for (const auto& [a, p] : e.terms().front().mono.powers()) {
        if (keep(a)) common.emplace_back(a, p);
    }
    for (const auto& t : e.terms()) {
        for (auto& [a, p] : common) p = std::min(p, t.mono.degree(a));
    }
    return Monomial::from_powers(std::move(common));
}

Expr divide_monomial(const Expr& e, const Monomial& m) {
    if (m.is_one()) return e;
    std::vector<Term> out;
    out.reserve(e.size());
    for (const auto& t : e.terms()) {
        std::vector<Power> ps = t.mono.powers();
        for (const auto& [a, p] : m.powers()) {
            auto it = std::find_if(ps.begin(), ps.end(), [&](const Power& x) { return x.first == a; });
            if (it == ps.end() || it->second < p) {
                throw InternalError("divide_monomial: monomial does not divide term");
            }
            it->second -= p;
        }
        out.push_back(Term{Monomial::from_powers(std::move(ps)), t.coeff});
    }
    return Expr::from_terms(std::move(out));
}

std::optional<Expr> exact_quotient(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw DivisionByZeroError("exact_quotient by zero");
    if (a.is_zero()) return Expr();
    if (b.size() > a.size()) return std::nullopt;
    // Leading terms under the graded term order; a rewrite by a side relation
    // could break the division, so the product is checked at the end.
    const Term& lb = b.terms().front();
    std::vector<Term> quotient;
    Expr r = a;
    while (!r.is_zero()) {
        const Term& lr = r.terms().front();
        std::vector<Power> ps = lr.mono.powers();
        for (const auto& [atom, k] : lb.mono.powers()) {
            auto it = std::find_if(ps.begin(), ps.end(), [&](const Power& x) { return x.first == atom; });
            if (it == ps.end() || it->second < k) return std::nullopt;
            it->second -= k;
        }
        Term t{Monomial::from_powers(std::move(ps)), lr.coeff / lb.coeff};
        r -= Expr(t.mono, t.coeff) * b;
        quotient.push_back(std::move(t));
        if (quotient.size() > a.size() + 64) return std::nullopt;
    }
    Expr q = Expr::from_terms(std::move(quotient));
    if (q * b != a) return std::nullopt;
    return q;
}

bool proportional(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    if (a.size() != b.size()) return false;
    Rational ratio = b.terms().front().coeff / a.terms().front().coeff;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a.terms()[i].mono == b.terms()[i].mono)) return false;
        if (a.terms()[i].coeff * ratio != b.terms()[i].coeff) return false;
    }
    return true;
}

Expr closed_fn_derivative(ClosedFn fn, const Expr& arg) {
    Expr self(Atom::func(fn, arg));
    switch (fn) {
    case ClosedFn::Exp: return self;
    case ClosedFn::Tan: return Expr(1) + self * self;
    case ClosedFn::Tanh:
    case ClosedFn::Coth: return Expr(1) - self * self;
    case ClosedFn::Sech: return -(self * Expr(Atom::func(ClosedFn::Tanh, arg)));
    case ClosedFn::Csch: return -(self * Expr(Atom::func(ClosedFn::Coth, arg)));
    }
    return Expr();
}

// ---------------------------------------------------------------------------
// Printing (the CLI expression grammar)

std::ostream& operator<<(std::ostream& os, Atom a) {
    switch (a.kind()) {
    case Atom::Kind::Symbol: os << name_of(a.name()); break;
    case Atom::Kind::Deriv: {
        FunctionRef fn = a.function();
        os << name_of(fn->name);
        if (a.order() > 0) {
            os << '_';
            for (std::size_t i = 0; i < fn->args.size(); ++i) {
                for (unsigned k = 0; k < a.alpha()[i]; ++k) os << name_of(fn->args[i]);
            }
        }
        if (fn->kind == FunctionKind::Opaque) {
            os << '(';
            for (std::size_t i = 0; i < fn->args.size(); ++i) {
                if (i) os << ',';
                os << name_of(fn->args[i]);
            }
            os << ')';
        }
        break;
    }
    case Atom::Kind::Func: os << closed_fn_name(a.closed()) << '(' << a.arg() << ')'; break;
    }
    return os;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
    if (e.is_zero()) return os << '0';
    bool first = true;
    for (const auto& t : e.terms()) {
        Rational c = t.coeff;
        if (first) {
            if (c < 0) {
                os << '-';
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool wrote = false;
        if (t.mono.is_one() || c != 1) {
            os << c.get_str();
            wrote = true;
        }
        for (const auto& [a, p] : t.mono.powers()) {
            if (wrote) os << '*';
            os << a;
            if (p > 1) os << '^' << p;
            wrote = true;
        }
    }
    return os;
}

} // namespace symchain
