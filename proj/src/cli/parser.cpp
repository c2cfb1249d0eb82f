#include "symchain/parser.hpp"

#include "symchain/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace symchain {

std::string to_string(const Expr& e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

std::string to_string(const Fraction& f) {
    std::ostringstream os;
    os << f;
    return os.str();
}

std::string to_string(Atom a) {
    std::ostringstream os;
    os << a;
    return os.str();
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Number, Op, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;   // identifier base, number digits or operator
    std::string suffix; // derivative suffix after '_'
    int column = 0;
};

class Lexer {
public:
    Lexer(std::string_view text, int line, int column0)
        : text_(text), line_(line), col0_(column0) {
        advance();
    }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }
    int line() const { return line_; }

    [[noreturn]] void fail(const std::string& what, const std::string& expected) const {
        throw SyntaxError(what + " at line " + std::to_string(line_) + ", column " +
                              std::to_string(tok_.column) + " (expected " + expected + ")",
                          line_, tok_.column, expected);
    }

    bool accept(char op) {
        if (tok_.kind == Tok::Op && tok_.text[0] == op) {
            advance();
            return true;
        }
        return false;
    }
    void expect(char op) {
        if (!accept(op)) fail(describe(), std::string("'") + op + "'");
    }
    std::string describe() const {
        switch (tok_.kind) {
        case Tok::End: return "unexpected end of input";
        case Tok::Ident: return "unexpected name '" + tok_.text + "'";
        case Tok::Number: return "unexpected number " + tok_.text;
        case Tok::Op: return "unexpected '" + tok_.text + "'";
        }
        return "unexpected token";
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.column = col0_ + static_cast<int>(pos_) + 1;
        if (pos_ >= text_.size()) return;
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t s = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            tok_.kind = Tok::Ident;
            tok_.text = std::string(text_.substr(s, pos_ - s));
            if (pos_ < text_.size() && text_[pos_] == '_') {
                std::size_t t = ++pos_;
                while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
                    ++pos_;
                }
                if (pos_ == t) {
                    throw SyntaxError("empty derivative suffix at line " + std::to_string(line_),
                                      line_, col0_ + static_cast<int>(t) + 1, "derivative suffix");
                }
                tok_.suffix = std::string(text_.substr(t, pos_ - t));
            }
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            tok_.kind = Tok::Number;
            tok_.text = std::string(text_.substr(s, pos_ - s));
            return;
        }
        if (std::string_view("+-*/^(),=<;:").find(c) != std::string_view::npos) {
            tok_.kind = Tok::Op;
            tok_.text = std::string(1, c);
            ++pos_;
            return;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "' at line " +
                              std::to_string(line_) + ", column " + std::to_string(tok_.column),
                          line_, tok_.column, "expression");
    }

    std::string_view text_;
    int line_;
    int col0_;
    std::size_t pos_ = 0;
    Token tok_;
};

// ---------------------------------------------------------------------------
// Expressions

class ExprParser {
public:
    ExprParser(Lexer& lex, const VarSpace& space) : lex_(lex), space_(space) {}

    Fraction expression() {
        Fraction acc = term();
        while (true) {
            if (lex_.accept('+')) {
                acc += term();
            } else if (lex_.accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    void finish() {
        if (lex_.peek().kind != Tok::End) lex_.fail(lex_.describe(), "operator or end of line");
    }

private:
    Fraction term() {
        Fraction acc = unary();
        while (true) {
            if (lex_.accept('*')) {
                acc *= unary();
            } else if (lex_.accept('/')) {
                Fraction d = unary();
                if (d.is_zero()) throw DivisionByZeroError("division by zero in expression");
                acc /= d;
            } else {
                return acc;
            }
        }
    }

    Fraction unary() {
        if (lex_.accept('-')) return -unary();
        if (lex_.accept('+')) return unary();
        return power();
    }

    Fraction power() {
        Fraction base = primary();
        if (!lex_.accept('^')) return base;
        bool neg = lex_.accept('-');
        if (lex_.peek().kind != Tok::Number) lex_.fail(lex_.describe(), "integer exponent");
        unsigned long k = std::stoul(lex_.take().text);
        Fraction r = pow(base, static_cast<unsigned>(k));
        if (!neg) return r;
        if (r.is_zero()) throw DivisionByZeroError("negative power of zero");
        return Fraction(1) / r;
    }

    Fraction primary() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Number) {
            return Fraction(Rational(mpz_class(lex_.take().text)));
        }
        if (lex_.accept('(')) {
            Fraction e = expression();
            lex_.expect(')');
            return e;
        }
        if (t.kind == Tok::Ident) return name();
        lex_.fail(lex_.describe(), "number, name or '('");
    }

    std::vector<std::string> arg_names() {
        std::vector<std::string> out;
        do {
            if (lex_.peek().kind != Tok::Ident || !lex_.peek().suffix.empty()) {
                lex_.fail(lex_.describe(), "argument name");
            }
            out.push_back(lex_.take().text);
        } while (lex_.accept(','));
        lex_.expect(')');
        return out;
    }

    std::vector<std::uint16_t> suffix_alpha(FunctionRef fn, const std::string& suffix) {
        std::vector<std::uint16_t> alpha(fn->args.size(), 0);
        std::size_t pos = 0;
        while (pos < suffix.size()) {
            std::size_t best = fn->args.size();
            std::size_t best_len = 0;
            for (std::size_t j = 0; j < fn->args.size(); ++j) {
                const std::string& a = name_of(fn->args[j]);
                if (a.size() > best_len && suffix.compare(pos, a.size(), a) == 0) {
                    best = j;
                    best_len = a.size();
                }
            }
            if (best == fn->args.size()) {
                throw NameError("'" + suffix.substr(pos) + "' is not a variable of " +
                                name_of(fn->name));
            }
            alpha[best] += 1;
            pos += best_len;
        }
        return alpha;
    }

    Fraction name() {
        Token t = lex_.take();
        SymId s = intern(t.text);
        if (t.suffix.empty()) {
            if (auto fn = closed_fn_from_name(t.text); fn && !space_.declares(s)) {
                lex_.expect('(');
                Fraction arg = expression();
                lex_.expect(')');
                return Fraction(make_closed(*fn, arg.as_polynomial()));
            }
        }
        FunctionRef fn = space_.dependent(s);
        if (!fn) fn = space_.function(s);
        if (fn) {
            std::vector<std::uint16_t> alpha(fn->args.size(), 0);
            if (!t.suffix.empty()) alpha = suffix_alpha(fn, t.suffix);
            if (fn->kind != FunctionKind::Dependent && lex_.accept('(')) {
                auto args = arg_names();
                std::vector<std::string> declared;
                for (SymId a : fn->args) declared.push_back(name_of(a));
                if (args != declared) {
                    throw NameError("arguments of " + t.text + " do not match its declaration");
                }
            }
            return Fraction(Expr(Atom::deriv(fn, std::move(alpha))));
        }
        if (!t.suffix.empty()) {
            throw NameError("'" + t.text + "' is not a dependent variable or function");
        }
        return Fraction(Expr(space_.atom_of(t.text)));
    }

    Lexer& lex_;
    const VarSpace& space_;
};

Fraction parse_at(std::string_view text, const VarSpace& space, int line, int col0) {
    Lexer lex(text, line, col0);
    ExprParser p(lex, space);
    Fraction f = p.expression();
    p.finish();
    return f;
}

// ---------------------------------------------------------------------------
// Problem files

struct Line {
    int number;
    std::string text;
};

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<Line> logical_lines(std::string_view text) {
    std::vector<Line> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    int n = 0;
    std::string pending;
    int start = 0;
    while (std::getline(in, raw)) {
        ++n;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::string t = trim(raw);
        if (pending.empty()) start = n;
        if (!t.empty() && t.back() == '\\') {
            t.pop_back();
            pending += t + " ";
            continue;
        }
        pending += t;
        if (!trim(pending).empty()) out.push_back(Line{start, trim(pending)});
        pending.clear();
    }
    if (!trim(pending).empty()) out.push_back(Line{start, trim(pending)});
    return out;
}

// Splits on `sep` outside parentheses.
std::vector<std::string> split_top(std::string_view s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == sep && depth == 0) {
            out.push_back(trim(s.substr(last, i - last)));
            last = i + 1;
        }
    }
    out.push_back(trim(s.substr(last)));
    return out;
}

std::pair<std::string, std::string> keyword(const std::string& line) {
    std::size_t sp = 0;
    while (sp < line.size() && !std::isspace(static_cast<unsigned char>(line[sp]))) ++sp;
    return {line.substr(0, sp), trim(std::string_view(line).substr(sp))};
}

bool valid_name(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
}

[[noreturn]] void syntax(const Line& l, const std::string& what, const std::string& expected) {
    throw SyntaxError(what + " at line " + std::to_string(l.number), l.number, 1, expected);
}

std::vector<std::string> name_list(const Line& l, const std::string& rest) {
    std::vector<std::string> out;
    for (auto& n : split_top(rest, ',')) {
        if (!valid_name(n)) syntax(l, "bad name '" + n + "'", "name");
        out.push_back(n);
    }
    return out;
}

// "f(u, x)" -> ("f", {"u", "x"})
std::pair<std::string, std::vector<std::string>> function_decl(const Line& l, const std::string& s) {
    auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')') syntax(l, "bad function declaration '" + s + "'", "name(args)");
    std::string name = trim(s.substr(0, open));
    if (!valid_name(name)) syntax(l, "bad function name '" + name + "'", "name");
    std::vector<std::string> args;
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    if (!trim(inner).empty()) args = name_list(l, inner);
    return {name, args};
}

// Column of `part` inside the original line text (for error positions).
int column_of(const Line& l, const std::string& part) {
    auto p = l.text.find(part);
    return p == std::string::npos ? 0 : static_cast<int>(p);
}

Fraction parse_in_line(const Line& l, const std::string& part, const VarSpace& space) {
    return parse_at(part, space, l.number, column_of(l, part));
}

Expr poly_in_line(const Line& l, const std::string& part, const VarSpace& space) {
    Fraction f = parse_in_line(l, part, space);
    if (!f.is_polynomial()) {
        throw SyntaxError("expected a polynomial at line " + std::to_string(l.number), l.number,
                          column_of(l, part) + 1, "polynomial");
    }
    return f.num();
}

void declare_parameter(VarSpace& space, const Line& l, const std::string& item) {
    auto where = item.find(" where ");
    if (where == std::string::npos) {
        if (!valid_name(item)) syntax(l, "bad parameter '" + item + "'", "name");
        space.add_parameter(item);
        return;
    }
    std::string name = trim(item.substr(0, where));
    if (!valid_name(name)) syntax(l, "bad parameter '" + name + "'", "name");
    auto sides = split_top(item.substr(where + 7), '=');
    if (sides.size() != 2) syntax(l, "side relation needs '='", "'='");
    VarSpace tmp;
    tmp.add_independent(name);
    Expr rel = poly_in_line(l, sides[0], tmp) - poly_in_line(l, sides[1], tmp);
    Atom s = Atom::symbol(intern(name));
    for (Atom a : rel.atoms()) {
        if (a != s) syntax(l, "side relation must be univariate in " + name, "polynomial in " + name);
    }
    std::uint32_t d = rel.degree(s);
    if (d == 0) syntax(l, "side relation is constant", "polynomial in " + name);
    Rational lc = *rel.coefficient(s, d).constant_value();
    std::vector<Rational> coeffs(d);
    for (std::uint32_t i = 0; i < d; ++i) {
        coeffs[i] = *rel.coefficient(s, i).constant_value() / lc;
    }
    space.add_parameter(name, std::move(coeffs));
}

void add_functions(VarSpace& space, const Line& l, const std::string& rest, FunctionKind kind,
                   std::vector<FunctionRef>* out = nullptr) {
    for (auto& item : split_top(rest, ',')) {
        auto [name, args] = function_decl(l, item);
        FunctionRef fn = space.add_function(name, args, kind);
        if (out) out->push_back(fn);
    }
}

std::string relation_text(Atom p) {
    const auto& rel = p.relation();
    Expr e(Monomial(p, static_cast<std::uint32_t>(rel.size())));
    for (std::size_t i = 0; i < rel.size(); ++i) {
        e += Expr(Monomial(p, static_cast<std::uint32_t>(i)), rel[i]);
    }
    // Print without applying the relation to itself.
    std::ostringstream os;
    os << name_of(p.name()) << '^' << rel.size();
    for (std::size_t i = rel.size(); i-- > 0;) {
        if (rel[i] == 0) continue;
        Rational c = rel[i];
        os << (c < 0 ? " - " : " + ");
        if (c < 0) c = -c;
        if (i == 0) {
            os << c.get_str();
        } else {
            if (c != 1) os << c.get_str() << '*';
            os << name_of(p.name());
            if (i > 1) os << '^' << i;
        }
    }
    os << " = 0";
    return os.str();
}

std::string function_text(FunctionRef fn) {
    std::string s = name_of(fn->name) + "(";
    for (std::size_t i = 0; i < fn->args.size(); ++i) {
        s += (i ? "," : "") + name_of(fn->args[i]);
    }
    return s + ")";
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

} // namespace

Fraction parse_expression(std::string_view text, const VarSpace& space) {
    return parse_at(text, space, 1, 0);
}

Expr parse_polynomial(std::string_view text, const VarSpace& space) {
    Fraction f = parse_expression(text, space);
    if (!f.is_polynomial()) throw SyntaxError("expected a polynomial", 1, 1, "polynomial");
    return f.num();
}

Rank parse_rank(std::string_view text) {
    auto parts = split_top(text, ';');
    if (parts.size() < 2 || parts.size() > 3) {
        throw SyntaxError("rank needs 'vars ; unknowns [; lex|graded]'", 1, 1, "';'");
    }
    auto chain = [](const std::string& s) {
        std::vector<SymId> out;
        for (auto& n : split_top(s, '<')) {
            if (!valid_name(n)) throw SyntaxError("bad name '" + n + "' in rank", 1, 1, "name");
            out.push_back(intern(n));
        }
        return out;
    };
    RankScheme scheme = RankScheme::Graded;
    if (parts.size() == 3) {
        if (parts[2] == "lex") {
            scheme = RankScheme::Lex;
        } else if (parts[2] != "graded") {
            throw SyntaxError("unknown rank scheme '" + parts[2] + "'", 1, 1, "lex or graded");
        }
    }
    return Rank(chain(parts[0]), chain(parts[1]), scheme);
}

const Candidate& Problem::candidate(const std::string& name) const {
    for (const auto& c : candidates) {
        if (c.name == name) return c;
    }
    throw UsageError("no candidate named " + name);
}

VarSpace Problem::z_space() const {
    if (is_system()) return pde.space;
    return symchain::z_space(pde);
}

RingRef Problem::system_ring() const {
    if (!rank) throw UsageError("the system file has no rank line");
    auto ring = std::make_shared<DiffRing>();
    ring->space = pde.space;
    ring->rank = *rank;
    return ring;
}

Problem parse_problem(std::string_view text) {
    Problem pb;
    auto lines = logical_lines(text);
    bool have_z = false;
    VarSpace zspace;
    auto z = [&]() -> const VarSpace& {
        if (!have_z) {
            zspace = pb.z_space();
            have_z = true;
        }
        return zspace;
    };

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const Line& l = lines[i];
        auto [kw, rest] = keyword(l.text);
        auto& space = pb.pde.space;
        try {
            if (kw == "independent") {
                for (auto& n : name_list(l, rest)) space.add_independent(n);
            } else if (kw == "dependent") {
                for (auto& n : name_list(l, rest)) space.add_dependent(n);
            } else if (kw == "parameter") {
                if (rest.find(" where ") != std::string::npos) {
                    declare_parameter(space, l, rest);
                } else {
                    for (auto& n : split_top(rest, ',')) declare_parameter(space, l, n);
                }
            } else if (kw == "function") {
                add_functions(space, l, rest, FunctionKind::Opaque);
            } else if (kw == "unknown") {
                add_functions(space, l, rest, FunctionKind::Unknown, &pb.unknowns);
            } else if (kw == "infinitesimals") {
                auto groups = split_top(rest, ';');
                if (groups.size() != 2) syntax(l, "infinitesimals need 'xs ; us'", "';'");
                pb.pde.infinitesimals = name_list(l, groups[0]);
                for (auto& n : name_list(l, groups[1])) pb.pde.infinitesimals.push_back(n);
            } else if (kw == "equation") {
                auto sides = split_top(rest, '=');
                if (sides.size() != 2) {
                    throw SolvedFormError("equation at line " + std::to_string(l.number) +
                                          " is not of the form u_J = expression");
                }
                Expr lhs = poly_in_line(l, sides[0], space);
                bool solved = lhs.size() == 1 && lhs.terms()[0].coeff == 1 &&
                              lhs.terms()[0].mono.powers().size() == 1 &&
                              lhs.terms()[0].mono.powers()[0].second == 1;
                Atom pivot = solved ? lhs.terms()[0].mono.powers()[0].first : Atom();
                if (!solved || !pivot.is_deriv() ||
                    pivot.function()->kind != FunctionKind::Dependent) {
                    throw SolvedFormError("equation at line " + std::to_string(l.number) +
                                          " must have a single derivative on the left, e.g. u_t = -u_x");
                }
                Expr rhs = poly_in_line(l, sides[1], space);
                pb.pde.equations.push_back(PdeEquation{pivot, rhs});
            } else if (kw == "rank") {
                pb.rank = parse_rank(rest);
            } else if (kw == "extend") {
                for (auto& e : split_top(rest, ',')) pb.extend.push_back(e);
            } else if (kw == "poly") {
                pb.polys.push_back(poly_in_line(l, rest, space));
            } else if (kw == "candidate") {
                auto words = split_top(rest, ' ');
                words.erase(std::remove(words.begin(), words.end(), std::string()), words.end());
                if (words.empty() || words.size() > 2) syntax(l, "candidate needs a name", "name [kind]");
                Candidate c;
                c.name = words[0];
                if (words.size() == 2) {
                    if (words[1] == "classical") {
                        c.kind = GeneratorKind::Classical;
                    } else if (words[1] != "nonclassical") {
                        syntax(l, "unknown candidate kind '" + words[1] + "'", "classical or nonclassical");
                    }
                }
                c.space = z();
                bool closed = false;
                for (++i; i < lines.size(); ++i) {
                    const Line& cl = lines[i];
                    auto [ckw, crest] = keyword(cl.text);
                    if (ckw == "end") {
                        closed = true;
                        break;
                    }
                    if (ckw == "parameter") {
                        std::size_t before = c.space.parameters().size();
                        if (crest.find(" where ") != std::string::npos) {
                            declare_parameter(c.space, cl, crest);
                        } else {
                            for (auto& n : split_top(crest, ',')) declare_parameter(c.space, cl, n);
                        }
                        for (std::size_t k = before; k < c.space.parameters().size(); ++k) {
                            c.parameters.push_back(c.space.parameters()[k]);
                        }
                    } else if (ckw == "function") {
                        add_functions(c.space, cl, crest, FunctionKind::Unknown, &c.functions);
                    } else if (ckw == "let") {
                        auto sides = split_top(crest, '=');
                        if (sides.size() != 2) syntax(cl, "let needs '='", "'='");
                        Expr target = poly_in_line(cl, sides[0], c.space);
                        if (target.size() != 1 || target.terms()[0].coeff != 1 ||
                            target.terms()[0].mono.total_degree() != 1) {
                            syntax(cl, "let target must be a parameter or function", "name");
                        }
                        Atom a = target.terms()[0].mono.powers()[0].first;
                        c.instantiations.push_back(Binding{a, parse_in_line(cl, sides[1], c.space)});
                    } else if (ckw == "side") {
                        auto sides = split_top(crest, '=');
                        if (sides.size() > 2) syntax(cl, "side equation has several '='", "one '='");
                        Expr e = poly_in_line(cl, sides[0], c.space);
                        if (sides.size() == 2) e -= poly_in_line(cl, sides[1], c.space);
                        c.side.push_back(e);
                    } else if (ckw == "expect") {
                        auto words = split_top(crest, ' ');
                        words.erase(std::remove(words.begin(), words.end(), std::string()), words.end());
                        if (words.size() != 2) syntax(cl, "expect needs a system and a verdict", "SYSTEM VERDICT");
                        c.expectations.emplace_back(words[0], words[1]);
                    } else if (ckw == "discrepancy") {
                        if (crest.empty()) syntax(cl, "discrepancy needs a note", "text");
                        c.discrepancy = crest;
                    } else if (ckw == "assume") {
                        auto pos = crest.find("!=");
                        if (pos == std::string::npos || trim(crest.substr(pos + 2)) != "0") {
                            syntax(cl, "assume needs the form EXPR != 0", "EXPR != 0");
                        }
                        c.nonzero.push_back(poly_in_line(cl, crest.substr(0, pos), c.space));
                    } else if (ckw == "siderank") {
                        c.side_rank = parse_rank(crest);
                    } else {
                        auto sides = split_top(cl.text, '=');
                        if (sides.size() != 2 || !valid_name(sides[0])) {
                            syntax(cl, "expected 'name = expression' in candidate " + c.name,
                                   "infinitesimal binding");
                        }
                        c.infinitesimals.emplace_back(sides[0], parse_in_line(cl, sides[1], c.space));
                    }
                }
                if (!closed) syntax(l, "candidate " + c.name + " has no 'end'", "end");
                pb.candidates.push_back(std::move(c));
            } else {
                syntax(l, "unknown keyword '" + kw + "'", "declaration keyword");
            }
        } catch (const SyntaxError&) {
            throw;
        } catch (const Error& e) {
            if (e.kind() == "NameError") {
                throw NameError(std::string(e.what()) + " (line " + std::to_string(l.number) + ")");
            }
            throw;
        }
    }
    return pb;
}

Problem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

std::string print_problem(const Problem& pb) {
    std::ostringstream os;
    const VarSpace& vs = pb.pde.space;
    auto names = [](const std::vector<SymId>& ids) {
        std::vector<std::string> out;
        for (SymId s : ids) out.push_back(name_of(s));
        return out;
    };
    if (!vs.independents().empty()) os << "independent " << join(names(vs.independents()), ", ") << '\n';
    if (!vs.dependents().empty()) {
        std::vector<std::string> d;
        for (FunctionRef f : vs.dependents()) d.push_back(name_of(f->name));
        os << "dependent " << join(d, ", ") << '\n';
    }
    auto print_params = [&](const std::vector<Atom>& ps, const std::string& indent) {
        for (Atom p : ps) {
            os << indent << "parameter " << name_of(p.name());
            if (!p.relation().empty()) os << " where " << relation_text(p);
            os << '\n';
        }
    };
    print_params(vs.parameters(), "");
    for (FunctionRef fn : vs.functions()) {
        os << (fn->kind == FunctionKind::Opaque ? "function " : "unknown ") << function_text(fn) << '\n';
    }
    if (!pb.pde.infinitesimals.empty()) {
        std::size_t p = vs.independents().size();
        std::vector<std::string> a(pb.pde.infinitesimals.begin(), pb.pde.infinitesimals.begin() + p);
        std::vector<std::string> b(pb.pde.infinitesimals.begin() + p, pb.pde.infinitesimals.end());
        os << "infinitesimals " << join(a, ", ") << " ; " << join(b, ", ") << '\n';
    }
    for (const auto& eq : pb.pde.equations) {
        os << "equation " << eq.pivot << " = " << eq.rhs << '\n';
    }
    for (const auto& p : pb.polys) os << "poly " << p << '\n';
    if (pb.rank) os << "rank " << pb.rank->to_string() << '\n';
    if (!pb.extend.empty()) os << "extend " << join(pb.extend, ", ") << '\n';
    for (const auto& c : pb.candidates) {
        os << "candidate " << c.name
           << (c.kind == GeneratorKind::Classical ? " classical" : " nonclassical") << '\n';
        print_params(c.parameters, "  ");
        for (FunctionRef fn : c.functions) os << "  function " << function_text(fn) << '\n';
        for (const auto& b : c.instantiations) {
            os << "  let " << b.target << " = " << b.value << '\n';
        }
        for (const auto& [n, v] : c.infinitesimals) os << "  " << n << " = " << v << '\n';
        for (const auto& s : c.side) os << "  side " << s << " = 0\n";
        for (const auto& h : c.nonzero) os << "  assume " << h << " != 0\n";
        if (c.side_rank) os << "  siderank " << c.side_rank->to_string() << '\n';
        for (const auto& [sys, v] : c.expectations) os << "  expect " << sys << ' ' << v << '\n';
        if (!c.discrepancy.empty()) os << "  discrepancy " << c.discrepancy << '\n';
        os << "end\n";
    }
    return os.str();
}

} // namespace symchain
