// symchain: determining systems, chains, the classical/nonclassical bridge
// and the fixture corpus from the command line.
//
// Every command prints a human-readable text (or, with --json, the machine
// document) and writes the machine document to --out when given. Errors
// produce {"error": {...}} on stderr and exit status 2; a verdict that
// differs from --expect gives exit status 1.

#include "symchain/corpus.hpp"
#include "symchain/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef SYMCHAIN_CORPUS_DIR
#define SYMCHAIN_CORPUS_DIR "corpus"
#endif

using namespace symchain;
using Json = nlohmann::ordered_json;

namespace {

struct Output {
    Json doc;
    std::string text;
    int status = 0;
};

std::string str(const Expr& e) { return to_string(e); }

std::string derivative_text(const std::vector<std::uint16_t>& beta, const Rank& rank, const std::string& inner) {
    std::string ops;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        for (std::uint16_t k = 0; k < beta[i]; ++k) ops += name_of(rank.independents()[i]);
    }
    return ops.empty() ? inner : "D_" + ops + "(" + inner + ")";
}

Json certificate_json(const ReductionCertificate& cert, const Rank& rank, const std::string& member_prefix) {
    Json j;
    j["input"] = str(cert.input);
    j["multiplier"] = str(cert.multiplier);
    Json terms = Json::array();
    for (const auto& t : cert.terms) {
        terms.push_back({{"member", member_prefix + std::to_string(t.member + 1)},
                         {"derivative", derivative_text(t.beta, rank, member_prefix + std::to_string(t.member + 1))},
                         {"coeff", str(t.coeff)}});
    }
    j["terms"] = std::move(terms);
    j["remainder"] = str(cert.remainder);
    return j;
}

// multiplier * lhs = sum coeff * D(member) + remainder, on one line.
std::string certificate_text(const ReductionCertificate& cert, const Rank& rank, const std::string& lhs,
                             const std::string& member_prefix) {
    std::string out = "(" + str(cert.multiplier) + ") * " + lhs + " =";
    if (cert.terms.empty()) out += " 0";
    bool first = true;
    for (const auto& t : cert.terms) {
        out += first ? " " : " + ";
        first = false;
        out += "(" + str(t.coeff) + ") * " +
               derivative_text(t.beta, rank, member_prefix + std::to_string(t.member + 1));
    }
    if (!cert.remainder.is_zero()) out += " + (" + str(cert.remainder) + ")";
    return out;
}

Json chain_json(const Chain& ch) {
    Json members = Json::array();
    for (const auto& m : ch.members()) {
        members.push_back({{"leader", to_string(m.leader())}, {"initial", str(m.initial())}, {"poly", str(m.body())}});
    }
    return members;
}

std::string chain_text(const Chain& ch, const std::string& prefix) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        os << "  " << prefix << i + 1 << " [" << to_string(ch.members()[i].leader()) << "] = "
           << str(ch.members()[i].body()) << "\n";
    }
    return os.str();
}

void require_rank(const Problem& pb) {
    if (!pb.rank) throw UsageError("the problem file has no rank declaration");
    if (pb.pde.equations.empty()) throw UsageError("the problem file has no equations");
}

Output cmd_determining(const std::string& file, const std::string& kind) {
    Problem pb = load_problem(file);
    require_rank(pb);
    DeterminingSystem sys = kind == "classical" ? classical_determining(pb.pde, *pb.rank)
                                                : nonclassical_determining(pb.pde, *pb.rank);
    Output out;
    out.doc["kind"] = kind;
    out.doc["rank"] = sys.ring->rank.to_string();
    std::ostringstream os;
    os << kind << " determining system, rank " << sys.ring->rank.to_string() << "\n";
    Json polys = Json::array();
    for (std::size_t i = 0; i < sys.polys.size(); ++i) {
        const auto& p = sys.polys[i];
        DiffPoly dp(p.body, sys.ring);
        Json j{{"poly", str(p.body)}, {"equation", p.equation + 1}};
        j["leader"] = dp.is_degenerate() ? "" : to_string(dp.leader());
        j["jets"] = str(Expr(p.jets));
        polys.push_back(std::move(j));
        os << "  p" << i + 1 << " = " << str(p.body) << "\n";
    }
    out.doc["polys"] = std::move(polys);
    out.doc["raw_count"] = sys.raw.size();
    os << sys.polys.size() << " members (" << sys.raw.size() << " coefficients)\n";
    out.text = os.str();
    return out;
}

Output cmd_chain(const std::string& file) {
    Problem pb = load_problem(file);
    if (!pb.is_system()) throw UsageError(file + " is not a system file (no unknown/poly lines)");
    RingRef ring = pb.system_ring();
    Chain ch = wu_chain(pb.polys, ring);
    Output out;
    out.doc["rank"] = ring->rank.to_string();
    out.doc["chain"] = chain_json(ch);
    out.doc["is"] = str(ch.is_product());
    Json certs = Json::array();
    std::ostringstream os;
    os << "chain of " << pb.polys.size() << " polynomials, rank " << ring->rank.to_string() << "\n"
       << chain_text(ch, "A") << "IS = " << str(ch.is_product()) << "\n";
    for (std::size_t i = 0; i < pb.polys.size(); ++i) {
        auto cert = prem(pb.polys[i], ch);
        certs.push_back(certificate_json(cert, ring->rank, "A"));
        os << "  " << certificate_text(cert, ring->rank, "f" + std::to_string(i + 1), "A") << "\n";
    }
    out.doc["certificates"] = std::move(certs);
    out.text = os.str();
    return out;
}

Output cmd_connect(const std::string& file) {
    Problem pb = load_problem(file);
    require_rank(pb);
    BridgeResult br = build_bridge(pb.pde, *pb.rank);
    const Rank& rank = br.ring->rank;
    Output out;
    std::ostringstream os;
    out.doc["rank"] = rank.to_string();
    out.doc["normalized"] = name_of(br.xi1);
    out.doc["Dprime"] = chain_json(br.cprime);
    out.doc["IS_Dprime"] = str(br.is_cprime);
    out.doc["Dpp"] = chain_json(br.dpp);
    out.doc["C"] = chain_json(br.c);
    out.doc["IS_C"] = str(br.is_c);
    Json d = Json::array();
    for (const auto& p : br.nonclassical.bodies()) d.push_back(str(p));
    out.doc["D"] = std::move(d);
    os << "classical chain D', IS = " << str(br.is_cprime) << "\n" << chain_text(br.cprime, "d")
       << "D'' (leaders in " << name_of(br.xi1) << ")\n" << chain_text(br.dpp, "d''")
       << "bridging chain C, IS = " << str(br.is_c) << "\n" << chain_text(br.c, "q");
    Json ids = Json::array();
    os << "identities\n";
    for (std::size_t i = 0; i < br.identities.size(); ++i) {
        const auto& cert = br.identities[i];
        ids.push_back(certificate_json(cert, rank, "q"));
        os << "  " << certificate_text(cert, rank, "p" + std::to_string(i + 1), "q") << "\n";
    }
    out.doc["identities"] = std::move(ids);
    out.text = os.str();
    return out;
}

Json report_json(const MembershipReport& rep) {
    Json j;
    j["candidate"] = rep.candidate;
    j["system"] = rep.system;
    Json rs = Json::array();
    for (const auto& r : rep.residuals) {
        rs.push_back({{"poly", str(r.input)}, {"residual", str(r.reduced)}});
    }
    j["residuals"] = std::move(rs);
    if (rep.side_is) j["side_is"] = str(*rep.side_is);
    j["verdict"] = rep.all_zero() ? "zero" : "nonzero";
    return j;
}

Output cmd_check(const std::string& file, const std::string& name, const std::vector<std::string>& against,
                 const std::string& expect) {
    Problem pb = load_problem(file);
    const Candidate& cand = pb.candidate(name);
    std::string system = against.empty() ? "D" : against[0];
    MembershipReport rep;
    if (system == "chain") {
        if (against.size() != 2) throw UsageError("--against chain needs a system file");
        Problem sys = load_problem(against[1]);
        if (!sys.is_system()) throw UsageError(against[1] + " is not a system file");
        rep = check_membership(cand, sys.polys, sys.system_ring(), "chain " + against[1]);
    } else {
        require_rank(pb);
        auto names = pb.pde.infinitesimal_names();
        if (system == "Dprime") {
            auto d = classical_determining(pb.pde, *pb.rank);
            rep = check_membership(as_classical(cand, names), d.bodies(), d.ring, system);
        } else if (system == "D") {
            auto d = nonclassical_determining(pb.pde, *pb.rank);
            rep = check_membership(as_nonclassical(cand, names), d.bodies(), d.ring, system);
        } else if (system == "C") {
            BridgeResult br = build_bridge(pb.pde, *pb.rank);
            rep = check_membership(as_nonclassical(cand, names), br.c.bodies(), br.ring, system);
        } else {
            throw UsageError("--against must be D, Dprime, C or chain FILE");
        }
    }
    Output out;
    out.doc = report_json(rep);
    std::ostringstream os;
    os << "candidate " << name << " against " << rep.system << "\n";
    for (std::size_t i = 0; i < rep.residuals.size(); ++i) {
        os << "  [" << i + 1 << "] " << str(rep.residuals[i].reduced) << "\n";
    }
    if (rep.side_is) os << "side chain IS = " << str(*rep.side_is) << "\n";
    std::string verdict = rep.all_zero() ? "zero" : "nonzero";
    os << "verdict: " << verdict << "\n";
    out.text = os.str();
    if (!expect.empty() && expect != verdict) out.status = 1;
    return out;
}

Output cmd_trivial(const std::string& file, const std::string& name, const std::string& expect) {
    Problem pb = load_problem(file);
    require_rank(pb);
    BridgeResult br = build_bridge(pb.pde, *pb.rank);
    auto v = triviality_test(as_nonclassical(pb.candidate(name), pb.pde.infinitesimal_names()), br);
    std::string verdict(verdict_name(v.verdict));
    Output out;
    out.doc["candidate"] = name;
    out.doc["verdict"] = verdict;
    out.doc["subset"] = v.subset;
    if (!v.witness.is_zero()) out.doc["witness"] = str(v.witness);
    if (v.xi1) out.doc[name_of(br.xi1)] = to_string(*v.xi1);
    Json img = Json::array();
    for (const auto& e : v.image) img.push_back(str(e));
    out.doc["image"] = std::move(img);
    std::ostringstream os;
    os << "candidate " << name << " substituted into " << v.subset << "\n";
    for (const auto& e : v.image) os << "  " << str(e) << "\n";
    if (!v.witness.is_zero()) os << "witness: " << str(v.witness) << "\n";
    if (v.xi1) os << name_of(br.xi1) << " = " << to_string(*v.xi1) << "\n";
    os << "verdict: " << verdict << "\n";
    out.text = os.str();
    if (!expect.empty() && expect != verdict) out.status = 1;
    return out;
}

Output cmd_corpus(std::vector<std::string> files, std::size_t cases, std::uint64_t seed, bool timing) {
    if (files.empty()) {
        for (const auto& entry : std::filesystem::directory_iterator(SYMCHAIN_CORPUS_DIR)) {
            if (entry.path().extension() == ".sym") files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
    }
    CorpusOptions opts;
    opts.property_cases = cases;
    opts.seed = seed;
    opts.timing = timing;
    CorpusReport report = run_corpus(files, opts);
    Output out;
    out.doc = Json::parse(symchain::report_json(report));
    std::ostringstream os;
    std::size_t passed = 0;
    for (const auto& f : report.fixtures) {
        os << (f.ok() ? "ok    " : "FAIL  ") << f.name << "  " << f.verdict;
        if (timing) os << "  (" << f.runtime << " s)";
        os << "\n";
        if (!f.ok()) {
            for (const auto& r : f.residuals) os << "        " << r << "\n";
            for (const auto& n : f.notes) os << "        " << n << "\n";
        }
        if (f.ok()) ++passed;
    }
    for (const auto& p : report.properties) {
        os << (p.failures ? "FAIL  " : "ok    ") << "property " << p.name << "  " << p.cases - p.failures << "/"
           << p.cases << "\n";
        if (p.failures) os << "        " << p.first_failure << "\n";
    }
    os << passed << "/" << report.fixtures.size() << " fixtures, seed " << report.seed << "\n";
    out.text = os.str();
    out.status = report.ok() ? 0 : 1;
    return out;
}

Json error_json(const std::exception& e) {
    Json err;
    if (const auto* se = dynamic_cast<const SyntaxError*>(&e)) {
        err["kind"] = se->kind();
        err["line"] = se->line();
        err["column"] = se->column();
        err["expected"] = se->expected();
    } else if (const auto* ue = dynamic_cast<const Error*>(&e)) {
        err["kind"] = ue->kind();
    } else {
        err["kind"] = "InternalError";
    }
    err["message"] = e.what();
    return Json{{"error", err}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetry determining systems, Ritt-Wu chains and the classical/nonclassical bridge"};
    app.require_subcommand(1);
    std::string out_file;
    bool json = false;
    app.add_option("--out", out_file, "Write the machine document to FILE");
    app.add_flag("--json", json, "Print the machine document instead of text");

    std::string problem, kind = "nonclassical", system, candidate, expect;
    std::vector<std::string> against;

    auto* det = app.add_subcommand("determining", "Classical or nonclassical determining system");
    det->add_option("--problem", problem)->required()->check(CLI::ExistingFile);
    det->add_option("--kind", kind)->check(CLI::IsMember({"classical", "nonclassical"}));

    auto* chn = app.add_subcommand("chain", "Wu chain of a system file, with IS and certificates");
    chn->add_option("--system", system)->required()->check(CLI::ExistingFile);

    auto* con = app.add_subcommand("connect", "D', D'', C, IS values and the identities");
    con->add_option("--problem", problem)->required()->check(CLI::ExistingFile);

    auto* chk = app.add_subcommand("check", "Substitute a candidate into a system");
    chk->add_option("--problem", problem)->required()->check(CLI::ExistingFile);
    chk->add_option("--candidate", candidate)->required();
    chk->add_option("--against", against, "D, Dprime, C or chain FILE")->expected(1, 2);
    chk->add_option("--expect", expect)->check(CLI::IsMember({"zero", "nonzero"}));

    auto* tri = app.add_subcommand("trivial", "Nontriviality test of a nonclassical candidate");
    tri->add_option("--problem", problem)->required()->check(CLI::ExistingFile);
    tri->add_option("--candidate", candidate)->required();
    tri->add_option("--expect", expect)->check(CLI::IsMember({"nontrivial", "classical_equivalent", "inconclusive"}));

    std::vector<std::string> files;
    std::size_t cases = 200;
    std::uint64_t seed = 0;
    bool no_timing = false;
    auto* cor = app.add_subcommand("corpus", "Run the fixture corpus and the property suites");
    cor->add_option("files", files, "Problem files (default: every .sym file of the corpus directory)");
    cor->add_option("--cases", cases, "Cases per property suite");
    cor->add_option("--seed", seed, "Property seed (default: SYMCHAIN_SEED or a fixed seed)");
    cor->add_flag("--no-timing", no_timing, "Report runtimes as 0 so that reports are byte-stable");

    for (auto* sub : {det, chn, con, chk, tri, cor}) {
        sub->add_option("--out", out_file, "Write the machine document to FILE");
        sub->add_flag("--json", json, "Print the machine document instead of text");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << error_json(UsageError(e.what())).dump(2) << "\n";
        return 2;
    }

    Output out;
    try {
        if (*det) out = cmd_determining(problem, kind);
        else if (*chn) out = cmd_chain(system);
        else if (*con) out = cmd_connect(problem);
        else if (*chk) out = cmd_check(problem, candidate, against, expect);
        else if (*tri) out = cmd_trivial(problem, candidate, expect);
        else out = cmd_corpus(files, cases, seed, !no_timing);
    } catch (const std::exception& e) {
        std::cerr << error_json(e).dump(2) << "\n";
        return 2;
    }
    if (!out_file.empty()) {
        std::ofstream f(out_file);
        if (!f) {
            std::cerr << error_json(UsageError("cannot write " + out_file)).dump(2) << "\n";
            return 2;
        }
        f << out.doc.dump(2) << "\n";
    }
    if (json) std::cout << out.doc.dump(2) << "\n";
    else std::cout << out.text;
    return out.status;
}
