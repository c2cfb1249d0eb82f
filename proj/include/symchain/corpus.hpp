#pragma once

// Golden fixtures read from problem files, and the corpus report.
//
// Each problem file yields a bridge fixture, an extension fixture when it has
// `extend` lines, one fixture per candidate (its `expect` lines) and an
// inclusion-audit fixture. Expectation systems:
//
//   Dprime  classical determining system (nonclassical candidates enter with
//           the normalized infinitesimal set to 1)
//   C       the bridging chain
//   D       nonclassical determining system
//   DQ      D with the extension polynomials
//   AS      the chain of DQ
//   trivial verdict of the nontriviality test
//
// with verdicts zero / nonzero (membership) or the verdict names.

#include "symchain/bridge.hpp"
#include "symchain/parser.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace symchain {

struct FixtureResult {
    std::string name;
    std::string verdict; // pass, fail, expected-discrepancy, error
    std::vector<std::string> residuals; // "SYSTEM[i] = expr" for nonzero residuals
    std::vector<std::string> notes;
    double runtime = 0; // seconds

    bool ok() const { return verdict == "pass" || verdict == "expected-discrepancy"; }
};

struct PropertyResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;
};

struct CorpusReport {
    std::vector<FixtureResult> fixtures;
    std::vector<PropertyResult> properties;
    std::uint64_t seed = 0;

    bool ok() const;
};

struct CorpusOptions {
    std::size_t property_cases = 200;
    std::uint64_t seed = 0; // 0: SYMCHAIN_SEED or the default seed
    bool timing = true;     // false: runtimes reported as 0
};

// The fixtures of one problem file; `stem` prefixes the fixture names.
std::vector<FixtureResult> run_fixtures(const Problem& problem, const std::string& stem,
                                        bool timing = true);

// Fixtures of every file (concurrently per file, reported sorted by name)
// followed by the property suites.
CorpusReport run_corpus(const std::vector<std::string>& files, const CorpusOptions& options = {});

// The seed from SYMCHAIN_SEED, or a fixed default.
std::uint64_t default_seed();

// Randomized properties of the kernel: certificate identity, reducedness of
// remainders, prem idempotence, commuting total derivatives, Leibniz rule,
// normal-form idempotence and the wu_chain postcondition.
std::vector<PropertyResult> run_properties(std::uint64_t seed, std::size_t cases);

std::string report_json(const CorpusReport& report);

} // namespace symchain
