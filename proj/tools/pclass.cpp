// pclass: construct and verify the Galois module decomposition of p-th power
// classes for cyclic degree-p Kummer extensions.
//
// subcommands:
//   analyze  one case end to end, JSON report on stdout
//   verify   run a JSONL corpus of cases, aggregate pass/fail
//   random   seeded module-engine fuzzing

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pclass/report.hpp"

using namespace pclass;

namespace {

int cmd_analyze(const cli::CaseSpec& spec, const std::string& out, const std::string& log) {
    cli::Report rep;
    try {
        rep = cli::run_case(spec);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code_for(e);
    }
    std::string body = rep.to_json(false).dump(2);
    std::cout << body << "\n";
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "error: cannot write " << out << "\n";
            return 2;
        }
        f << body << "\n";
    }
    if (!log.empty()) {
        cli::CorpusSummary one;
        one.total = 1;
        one.reports.push_back(rep);
        one.errors.push_back("");
        cli::append_jsonl_log(log, one);
    }
    return rep.any_failure() ? 1 : 0;
}

int cmd_verify(const std::string& corpus, const std::string& out, const std::string& log) {
    cli::CorpusSummary summary;
    try {
        summary = cli::run_corpus(cli::load_corpus(corpus));
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code_for(e);
    }
    nlohmann::json j;
    j["schema"] = cli::kSchema;
    j["version"] = cli::kVersion;
    j["total"] = summary.total;
    j["failed"] = summary.failed;
    j["errored"] = summary.errored;
    nlohmann::json cases = nlohmann::json::array();
    for (std::size_t i = 0; i < summary.reports.size(); ++i) {
        const cli::Report& r = summary.reports[i];
        nlohmann::json c;
        c["case"] = r.spec.to_json();
        c["ok"] = summary.errors[i].empty() && !r.any_failure();
        if (!summary.errors[i].empty()) c["error"] = summary.errors[i];
        cases.push_back(c);
    }
    j["cases"] = cases;
    std::string body = j.dump(2);
    std::cout << body << "\n";
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "error: cannot write " << out << "\n";
            return 2;
        }
        f << body << "\n";
    }
    if (!log.empty()) cli::append_jsonl_log(log, summary);
    return (summary.failed || summary.errored) ? 1 : 0;
}

int cmd_random(unsigned p, std::size_t dim, std::size_t trials, std::uint64_t seed) {
    cli::RandomSummary s;
    try {
        s = cli::run_random(p, dim, trials, seed);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code_for(e);
    }
    std::cout << s.to_json().dump(2) << "\n";
    return s.failures ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galois module structure of p-th power classes of degree-p Kummer extensions"};
    app.require_subcommand(1);

    cli::CaseSpec spec;
    std::string out, log, corpus;

    CLI::App* analyze = app.add_subcommand("analyze", "analyze a single extension K/F");
    analyze->add_option("--p", spec.p, "the prime p")->required();
    analyze->add_option("--backend", spec.backend, "local | quadratic")->required();
    analyze->add_option("--ell", spec.ell, "residue characteristic of F (local backend)");
    analyze->add_option("--a", spec.a, "element a of F (grammar: ints, pi, u, zeta, *, ^)")
        ->required();
    analyze->add_option("--precision", spec.precision, "uniformizer digits (local backend)");
    analyze->add_option("--seed", spec.seed, "seed for sampled checks");
    analyze->add_option("--fault", spec.fault, "fault injection (corrupt_sigma)");
    analyze->add_option("--out", out, "write the report JSON here");
    analyze->add_option("--log", log, "append a JSONL log record here");

    CLI::App* verify = app.add_subcommand("verify", "run a corpus of cases (JSON lines)");
    verify->add_option("--corpus", corpus, "corpus file, one case spec per line")->required();
    verify->add_option("--out", out, "write the summary JSON here");
    verify->add_option("--log", log, "append per-case JSONL records here");

    unsigned rp = 3;
    std::size_t rdim = 12, rtrials = 100;
    std::uint64_t rseed = 1;
    CLI::App* random = app.add_subcommand("random", "seeded random-module property suite");
    random->add_option("--p", rp, "the prime p")->required();
    random->add_option("--dim", rdim, "module dimension (<= 32)");
    random->add_option("--trials", rtrials, "number of trials");
    random->add_option("--seed", rseed, "seed");

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) return cmd_analyze(spec, out, log);
    if (verify->parsed()) return cmd_verify(corpus, out, log);
    if (random->parsed()) return cmd_random(rp, rdim, rtrials, rseed);
    return 2;
}
