#include "symchain/varspace.hpp"

#include "symchain/errors.hpp"

#include <algorithm>

namespace symchain {

namespace {

void check_fresh(const VarSpace& vs, SymId s) {
    if (vs.declares(s)) throw NameError("name declared twice: " + name_of(s));
}

} // namespace

void VarSpace::add_independent(const std::string& name) {
    SymId s = intern(name);
    check_fresh(*this, s);
    independents_.push_back(s);
}

FunctionRef VarSpace::add_dependent(const std::string& name) {
    SymId s = intern(name);
    check_fresh(*this, s);
    FunctionRef fn = declare_function(s, independents_, FunctionKind::Dependent);
    dependents_.push_back(fn);
    dep_index_.emplace(s, fn);
    return fn;
}

Atom VarSpace::add_parameter(const std::string& name, std::vector<Rational> relation) {
    SymId s = intern(name);
    check_fresh(*this, s);
    Atom a = Atom::symbol(s, std::move(relation));
    parameters_.push_back(a);
    param_index_.emplace(s, a);
    return a;
}

FunctionRef VarSpace::add_function(const std::string& name, const std::vector<std::string>& args,
                                   FunctionKind kind) {
    SymId s = intern(name);
    check_fresh(*this, s);
    std::vector<SymId> ids;
    for (const auto& a : args) {
        SymId id = intern(a);
        if (!is_independent(id) && !dependent(id)) {
            throw NameError("function argument is not a variable: " + a);
        }
        ids.push_back(id);
    }
    FunctionRef fn = declare_function(s, std::move(ids), kind);
    functions_.push_back(fn);
    fn_index_.emplace(s, fn);
    return fn;
}

bool VarSpace::is_independent(SymId s) const {
    return std::find(independents_.begin(), independents_.end(), s) != independents_.end();
}

std::optional<std::size_t> VarSpace::independent_index(SymId s) const {
    auto it = std::find(independents_.begin(), independents_.end(), s);
    if (it == independents_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - independents_.begin());
}

FunctionRef VarSpace::dependent(SymId s) const {
    auto it = dep_index_.find(s);
    return it == dep_index_.end() ? nullptr : it->second;
}

FunctionRef VarSpace::function(SymId s) const {
    auto it = fn_index_.find(s);
    return it == fn_index_.end() ? nullptr : it->second;
}

std::optional<Atom> VarSpace::parameter(SymId s) const {
    auto it = param_index_.find(s);
    if (it == param_index_.end()) return std::nullopt;
    return it->second;
}

bool VarSpace::declares(SymId s) const {
    return is_independent(s) || dependent(s) || function(s) || parameter(s);
}

Atom VarSpace::atom_of(const std::string& name) const {
    SymId s = intern(name);
    if (is_independent(s) || dependent(s)) return Atom::symbol(s);
    if (auto p = parameter(s)) return *p;
    if (FunctionRef fn = function(s)) {
        return Atom::deriv(fn, std::vector<std::uint16_t>(fn->args.size(), 0));
    }
    throw NameError("undeclared name: " + name);
}

Expr VarSpace::symbol_derivative(SymId s, SymId x) const {
    if (is_independent(s)) return Expr(s == x ? 1 : 0);
    if (FunctionRef fn = dependent(s)) {
        std::vector<std::uint16_t> alpha(fn->args.size(), 0);
        for (std::size_t i = 0; i < fn->args.size(); ++i) {
            if (fn->args[i] == x) {
                alpha[i] = 1;
                return Expr(Atom::deriv(fn, std::move(alpha)));
            }
        }
        return Expr();
    }
    return Expr();
}

void VarSpace::check_declared(const Expr& e) const {
    for (Atom a : e.atoms_deep()) {
        switch (a.kind()) {
        case Atom::Kind::Symbol:
            if (!declares(a.name())) throw NameError("undeclared name: " + name_of(a.name()));
            break;
        case Atom::Kind::Deriv: {
            FunctionRef fn = a.function();
            if (fn->kind == FunctionKind::Dependent ? dependent(fn->name) != fn
                                                    : function(fn->name) != fn) {
                throw NameError("undeclared function: " + name_of(fn->name));
            }
            break;
        }
        case Atom::Kind::Func: break;
        }
    }
}

} // namespace symchain
