#pragma once

#include "symchain/expr.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace symchain {

// The variables a computation lives over: independents x1..xp, dependents
// u^a(x1..xp) (whose jets are Deriv atoms), parameters (constants, possibly
// with a side relation) and declared functions (unknowns or opaque data).
//
// A VarSpace fixes what the total derivative of each plain symbol is: D_xi(xj)
// is the Kronecker delta, D_xi(u^a) is the first jet, parameters are constant.
class VarSpace {
public:
    void add_independent(const std::string& name);
    // Jets of `name` are taken over the independents declared so far.
    FunctionRef add_dependent(const std::string& name);
    Atom add_parameter(const std::string& name, std::vector<Rational> relation = {});
    FunctionRef add_function(const std::string& name, const std::vector<std::string>& args,
                             FunctionKind kind);

    const std::vector<SymId>& independents() const { return independents_; }
    const std::vector<FunctionRef>& dependents() const { return dependents_; }
    const std::vector<FunctionRef>& functions() const { return functions_; }
    const std::vector<Atom>& parameters() const { return parameters_; }

    bool is_independent(SymId s) const;
    std::optional<std::size_t> independent_index(SymId s) const;
    FunctionRef dependent(SymId s) const;   // nullptr if not a dependent
    FunctionRef function(SymId s) const;    // nullptr if not a declared function
    std::optional<Atom> parameter(SymId s) const;
    bool declares(SymId s) const;

    // The atom a bare name denotes: an independent, a dependent's value, a
    // parameter, or a zero-order function value.
    Atom atom_of(const std::string& name) const; // NameError if undeclared

    // D_x(s) for a plain symbol s.
    Expr symbol_derivative(SymId s, SymId x) const;

    // NameError if `e` mentions a name this space does not declare.
    void check_declared(const Expr& e) const;

private:
    std::vector<SymId> independents_;
    std::vector<FunctionRef> dependents_;
    std::vector<FunctionRef> functions_;
    std::vector<Atom> parameters_;
    std::map<SymId, FunctionRef> dep_index_;
    std::map<SymId, FunctionRef> fn_index_;
    std::map<SymId, Atom> param_index_;
};

} // namespace symchain
