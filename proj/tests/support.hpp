#pragma once

// Shared helpers for the unit tests and the acceptance binary.

#include "symchain/corpus.hpp"

#include <string>
#include <vector>

#ifndef SYMCHAIN_CORPUS_DIR
#define SYMCHAIN_CORPUS_DIR "corpus"
#endif

namespace symchain::testing {

inline std::string corpus_file(const std::string& stem) {
    return std::string(SYMCHAIN_CORPUS_DIR) + "/" + stem + ".sym";
}

inline Problem corpus(const std::string& stem) { return load_problem(corpus_file(stem)); }

// Equal up to a nonzero rational factor.
inline bool same_up_to_constant(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return primitive(a).second == primitive(b).second;
}

inline std::vector<Expr> parse_all(const std::vector<std::string>& texts, const VarSpace& space) {
    std::vector<Expr> out;
    for (const auto& t : texts) out.push_back(parse_polynomial(t, space));
    return out;
}

struct SetMatch {
    std::vector<std::size_t> missing; // expected entries with no partner
    std::vector<std::size_t> extra;   // computed entries with no partner
    bool ok() const { return missing.empty() && extra.empty(); }
};

// Multiset comparison up to per-polynomial constants and order.
inline SetMatch match_sets(const std::vector<Expr>& expected, const std::vector<Expr>& computed) {
    SetMatch m;
    std::vector<bool> used(computed.size(), false);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < computed.size() && !found; ++j) {
            if (!used[j] && same_up_to_constant(expected[i], computed[j])) used[j] = found = true;
        }
        if (!found) m.missing.push_back(i);
    }
    for (std::size_t j = 0; j < computed.size(); ++j) {
        if (!used[j]) m.extra.push_back(j);
    }
    return m;
}

} // namespace symchain::testing
