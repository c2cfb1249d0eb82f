#include "symchain/corpus.hpp"

#include "symchain/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <future>
#include <memory>
#include <sstream>

namespace symchain {

bool CorpusReport::ok() const {
    return std::all_of(fixtures.begin(), fixtures.end(), [](const FixtureResult& f) { return f.ok(); }) &&
           std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.failures == 0; });
}

namespace {

std::string show(const Expr& e) {
    std::ostringstream os;
    os << e;
    return os.str();
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Everything a problem's fixtures share, computed on first use.
class Context {
public:
    explicit Context(const Problem& pb) : pb_(pb) {
        if (!pb.rank) throw UsageError("the problem has no rank declaration");
        for (const auto& n : pb.pde.infinitesimal_names()) names_.push_back(n);
    }

    const BridgeResult& bridge() {
        if (!bridge_) bridge_ = std::make_unique<BridgeResult>(build_bridge(pb_.pde, *pb_.rank));
        return *bridge_;
    }

    const std::vector<Expr>& extended() {
        if (!extended_) {
            const auto& d = bridge().nonclassical;
            extended_ = std::make_unique<std::vector<Expr>>(d.bodies());
            for (const auto& e : pb_.extend) extended_->push_back(parse_polynomial(e, d.ring->space));
        }
        return *extended_;
    }

    const Chain& extension_chain() {
        if (!as_) {
            as_ = std::make_unique<Chain>(wu_chain(extended(), bridge().nonclassical.ring, WuOptions{true, true}));
        }
        return *as_;
    }

    const std::vector<std::string>& names() const { return names_; }

private:
    const Problem& pb_;
    std::vector<std::string> names_;
    std::unique_ptr<BridgeResult> bridge_;
    std::unique_ptr<std::vector<Expr>> extended_;
    std::unique_ptr<Chain> as_;
};

void record(FixtureResult& res, const MembershipReport& rep, const std::string& system,
            const std::string& expected, bool& met) {
    bool zero = rep.all_zero();
    met = expected == "zero" ? zero : !zero;
    for (std::size_t i : rep.nonzero()) {
        res.residuals.push_back(system + "[" + std::to_string(i + 1) + "] = " + show(rep.residuals[i].reduced));
    }
    if (rep.side_is) res.notes.push_back("side chain IS " + show(*rep.side_is));
}

FixtureResult candidate_fixture(Context& ctx, const Candidate& cand, const std::string& stem) {
    FixtureResult res;
    res.name = stem + "/" + cand.name;
    bool all_met = true;
    for (const auto& [system, expected] : cand.expectations) {
        bool met = false;
        const BridgeResult& br = ctx.bridge();
        if (system == "trivial") {
            auto v = triviality_test(as_nonclassical(cand, ctx.names()), br);
            std::string got(verdict_name(v.verdict));
            met = got == expected;
            std::string note = "trivial: " + got + " on " + v.subset;
            if (!v.witness.is_zero()) note += ", witness " + show(v.witness);
            if (v.xi1) note += ", " + name_of(br.xi1) + " = " + to_string(*v.xi1);
            res.notes.push_back(note);
        } else if (expected != "zero" && expected != "nonzero") {
            throw UsageError("membership verdict must be zero or nonzero, not " + expected);
        } else if (system == "Dprime") {
            auto rep = check_membership(as_classical(cand, ctx.names()), br.classical.bodies(),
                                        br.classical.ring, system);
            record(res, rep, system, expected, met);
        } else if (system == "C") {
            auto rep = check_membership(as_nonclassical(cand, ctx.names()), br.c.bodies(), br.ring, system);
            record(res, rep, system, expected, met);
        } else if (system == "D") {
            auto rep = check_membership(as_nonclassical(cand, ctx.names()), br.nonclassical.bodies(),
                                        br.nonclassical.ring, system);
            record(res, rep, system, expected, met);
        } else if (system == "DQ") {
            auto rep = check_membership(as_nonclassical(cand, ctx.names()), ctx.extended(),
                                        br.nonclassical.ring, system);
            record(res, rep, system, expected, met);
        } else if (system == "AS") {
            auto rep = check_membership(as_nonclassical(cand, ctx.names()), ctx.extension_chain().bodies(),
                                        br.nonclassical.ring, system);
            record(res, rep, system, expected, met);
        } else {
            throw UsageError("unknown expectation system " + system);
        }
        if (!met) {
            all_met = false;
            res.notes.push_back("expected " + system + " " + expected);
        }
    }
    if (all_met) {
        res.verdict = "pass";
    } else if (!cand.discrepancy.empty()) {
        res.verdict = "expected-discrepancy";
        res.notes.push_back("discrepancy: " + cand.discrepancy);
    } else {
        res.verdict = "fail";
    }
    return res;
}

template <typename F>
FixtureResult guarded(const std::string& name, bool timing, F&& body) {
    Stopwatch sw;
    FixtureResult res;
    try {
        res = body();
    } catch (const Error& e) {
        res = FixtureResult{};
        res.verdict = "error";
        res.notes.push_back(std::string(e.kind()) + ": " + e.what());
    } catch (const std::exception& e) {
        res = FixtureResult{};
        res.verdict = "error";
        res.notes.push_back(e.what());
    }
    res.name = name;
    res.runtime = timing ? sw.seconds() : 0;
    return res;
}

} // namespace

std::vector<FixtureResult> run_fixtures(const Problem& pb, const std::string& stem, bool timing) {
    std::vector<FixtureResult> out;
    if (pb.is_system()) return out;
    Context ctx(pb);
    out.push_back(guarded(stem + "/bridge", timing, [&] {
        const BridgeResult& br = ctx.bridge();
        FixtureResult res;
        res.verdict = "pass";
        res.notes.push_back("IS(C') = " + show(br.is_cprime));
        res.notes.push_back("IS(C) = " + show(br.is_c));
        res.notes.push_back(std::to_string(br.identities.size()) + " identities with remainder 0");
        return res;
    }));
    if (!pb.extend.empty()) {
        out.push_back(guarded(stem + "/extension", timing, [&] {
            const Chain& as = ctx.extension_chain();
            FixtureResult res;
            res.verdict = "pass";
            for (const auto& p : ctx.extended()) {
                if (!prem(p, as).remainder.is_zero()) {
                    res.verdict = "fail";
                    res.residuals.push_back("DQ: " + show(p) + " does not reduce to zero");
                }
            }
            res.notes.push_back(std::to_string(as.size()) + " members");
            return res;
        }));
    }
    for (const auto& cand : pb.candidates) {
        out.push_back(guarded(stem + "/" + cand.name, timing, [&] { return candidate_fixture(ctx, cand, stem); }));
    }
    if (!pb.candidates.empty()) {
        out.push_back(guarded(stem + "/inclusion", timing, [&] {
            FixtureResult res;
            res.verdict = "pass";
            for (const auto& e : inclusion_audit(ctx.bridge(), pb.candidates)) {
                std::string line = e.candidate + ":";
                if (!e.normalizable) line += " not normalizable,";
                line += std::string(" C' ") + (e.in_cprime ? "yes" : "no");
                if (e.normalizable) {
                    line += std::string(", C ") + (e.in_c ? "yes" : "no");
                    line += std::string(", D ") + (e.in_d ? "yes" : "no");
                }
                res.notes.push_back(line);
            }
            return res;
        }));
    }
    return out;
}

CorpusReport run_corpus(const std::vector<std::string>& files, const CorpusOptions& options) {
    CorpusReport report;
    report.seed = options.seed ? options.seed : default_seed();
    std::vector<std::future<std::vector<FixtureResult>>> jobs;
    for (const auto& file : files) {
        jobs.push_back(std::async(std::launch::async, [file, &options] {
            std::string stem = std::filesystem::path(file).stem().string();
            try {
                Problem pb = load_problem(file);
                return run_fixtures(pb, stem, options.timing);
            } catch (const std::exception& e) {
                FixtureResult res;
                res.name = stem + "/load";
                res.verdict = "error";
                res.notes.push_back(e.what());
                return std::vector<FixtureResult>{res};
            }
        }));
    }
    for (auto& j : jobs) {
        auto part = j.get();
        report.fixtures.insert(report.fixtures.end(), part.begin(), part.end());
    }
    std::sort(report.fixtures.begin(), report.fixtures.end(),
              [](const FixtureResult& a, const FixtureResult& b) { return a.name < b.name; });
    if (options.property_cases > 0) report.properties = run_properties(report.seed, options.property_cases);
    return report;
}

std::string report_json(const CorpusReport& report) {
    nlohmann::ordered_json doc;
    doc["seed"] = report.seed;
    auto& fx = doc["fixtures"] = nlohmann::ordered_json::array();
    std::size_t passed = 0;
    for (const auto& f : report.fixtures) {
        nlohmann::ordered_json j;
        j["name"] = f.name;
        j["verdict"] = f.verdict;
        j["residuals"] = f.residuals;
        j["notes"] = f.notes;
        j["runtime"] = f.runtime;
        fx.push_back(std::move(j));
        if (f.ok()) ++passed;
    }
    auto& pr = doc["properties"] = nlohmann::ordered_json::array();
    for (const auto& p : report.properties) {
        nlohmann::ordered_json j;
        j["name"] = p.name;
        j["cases"] = p.cases;
        j["failures"] = p.failures;
        if (p.failures) j["first_failure"] = p.first_failure;
        pr.push_back(std::move(j));
    }
    doc["summary"] = {{"fixtures", report.fixtures.size()},
                      {"passed", passed},
                      {"failed", report.fixtures.size() - passed},
                      {"ok", report.ok()}};
    return doc.dump(2) + "\n";
}

} // namespace symchain
