// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria run against the bundled corpus in data/corpus.jsonl.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <vector>

#include "pclass/local.hpp"
#include "pclass/quadratic.hpp"
#include "pclass/report.hpp"
#include "pclass/structure.hpp"
#include "pclass/tower.hpp"

using namespace pclass;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string corpus_path(int argc, char** argv) {
    if (argc > 1) return argv[1];
    return std::string(PCLASS_SOURCE_DIR) + "/data/corpus.jsonl";
}

} // namespace

int main(int argc, char** argv) {
    auto t_all = std::chrono::steady_clock::now();

    std::vector<cli::CaseSpec> corpus;
    try {
        corpus = cli::load_corpus(corpus_path(argc, argv));
    } catch (const error& e) {
        std::printf("FAIL  cannot load corpus: %s\n", e.what());
        return 1;
    }
    std::vector<cli::CaseSpec> local_cases;
    for (const auto& s : corpus) {
        if (s.backend == "local") local_cases.push_back(s);
    }

    // ---- criterion 1: triple agreement over the local corpus ----
    {
        auto t0 = std::chrono::steady_clock::now();
        cli::CorpusSummary sum = cli::run_corpus(local_cases);
        bool ok = local_cases.size() >= 50;
        std::string why;
        if (!ok) why = "corpus too small";

        std::set<unsigned> ps;
        std::set<std::pair<unsigned, unsigned>> pairs;
        bool ram = false, unram = false;
        for (const auto& s : local_cases) {
            ps.insert(s.p);
            pairs.insert({s.ell, s.p});
            if (s.a.find('u') != std::string::npos || s.a == "5") unram = true;
            else ram = true;
        }
        ok = ok && ps == std::set<unsigned>{2, 3, 5} && ram && unram;
        ok = ok && pairs.count({2, 2}) && pairs.count({3, 3});

        std::size_t agreed = 0;
        for (std::size_t i = 0; i < sum.reports.size(); ++i) {
            const cli::Report& r = sum.reports[i];
            bool good = sum.errors[i].empty() && r.has_multiplicities &&
                        r.checks.at("theorem3_match") == "pass" &&
                        r.checks.at("krull_schmidt_match") == "pass" &&
                        r.mult_oracle == r.mult_theorem3 && r.mult_oracle == r.mult_arithmetic;
            if (good) {
                ++agreed;
            } else if (why.empty()) {
                why = "disagreement at case " + r.spec.to_json().dump();
            }
        }
        ok = ok && agreed == local_cases.size();
        report(1, ok,
               "triple agreement (oracle = theorem3 = arithmetic) on " + std::to_string(agreed) +
                   "/" + std::to_string(local_cases.size()) + " local cases, " +
                   std::to_string(seconds_since(t0)) + " s" + (why.empty() ? "" : " [" + why + "]"));

        // ---- criterion 2: p = 5 cases have m_3 = m_4 = 0 ----
        {
            std::size_t p5 = 0;
            bool ok2 = true;
            for (const auto& r : sum.reports) {
                if (r.spec.p != 5) continue;
                ++p5;
                ok2 = ok2 && r.has_multiplicities;
                if (r.has_multiplicities) {
                    for (const auto* m : {&r.mult_oracle, &r.mult_theorem3, &r.mult_arithmetic}) {
                        ok2 = ok2 && m->m(3) == 0 && m->m(4) == 0;
                    }
                }
            }
            ok2 = ok2 && p5 > 0;
            report(2, ok2, "m_3 = m_4 = 0 in all " + std::to_string(p5) + " p = 5 corpus cases");
        }

        // ---- criterion 4: Lemma 2 + exact sequence on every local case ----
        {
            std::size_t good = 0;
            for (const auto& r : sum.reports) {
                if (r.checks.count("lemma2") && r.checks.at("lemma2") == "pass" &&
                    r.checks.count("exact_sequence") && r.checks.at("exact_sequence") == "pass") {
                    ++good;
                }
            }
            report(4, good == local_cases.size(),
                   "Lemma 2 and the exact-sequence check (with the surjectivity biconditional) on " +
                       std::to_string(good) + "/" + std::to_string(local_cases.size()) + " cases");
        }

        // ---- criterion 6: isomorphism test vs oracle profiles over all pairs ----
        {
            auto t6 = std::chrono::steady_clock::now();
            std::size_t pairs_checked = 0, mismatches = 0;
            for (std::size_t i = 0; i < sum.reports.size(); ++i) {
                for (std::size_t j = i + 1; j < sum.reports.size(); ++j) {
                    const cli::Report& a = sum.reports[i];
                    const cli::Report& b = sum.reports[j];
                    if (a.spec.p != b.spec.p) continue;
                    if (!a.has_invariants || !b.has_invariants) continue;
                    bool iso = structure::isomorphism_test(a.invariants, b.invariants);
                    bool oracle = a.mult_oracle == b.mult_oracle;
                    ++pairs_checked;
                    if (iso != oracle) ++mismatches;
                }
            }
            report(6, pairs_checked > 0 && mismatches == 0,
                   "isomorphism_test agrees with oracle Jordan profiles on " +
                       std::to_string(pairs_checked) + " same-p corpus pairs (" +
                       std::to_string(seconds_since(t6)) + " s)");
        }
    }

    // ---- criterion 3: Hilbert 90 round-trips, 100 per backend ----
    {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string why;

        // quadratic backend: exact
        for (long long a : {2LL, -1LL, 3LL, -5LL}) {
            auto ctx = quadratic::make_quadratic_tower(a);
            for (std::uint64_t s = 1; s <= 25; ++s) {
                tower::FieldElem w0 = ctx->random_element(1000 * (std::uint64_t)(a + 10) + s);
                tower::FieldElem alpha = ctx->div(ctx->sigma(w0), w0);
                tower::FieldElem w = structure::hilbert90_solve(*ctx, alpha);
                if (!ctx->eq(ctx->div(ctx->sigma(w), w), alpha)) {
                    ok = false;
                    why = "quadratic roundtrip failed";
                }
            }
        }

        // local backend: certified precision, stable under doubling
        std::vector<std::tuple<unsigned, unsigned, const char*>> towers{
            {3, 2, "3"}, {7, 3, "7"}, {2, 2, "2"}, {3, 3, "3"}};
        for (auto [ell, p, a] : towers) {
            for (int prec : {40, 80}) {
                auto ctx = local::make_K(local::make_base(ell, p, prec), a);
                for (std::uint64_t s = 1; s <= 25; ++s) {
                    tower::FieldElem w0 = ctx->random_element(s);
                    tower::FieldElem alpha = ctx->div(ctx->sigma(w0), w0);
                    tower::FieldElem w = structure::hilbert90_solve(*ctx, alpha);
                    if (!ctx->eq(ctx->div(ctx->sigma(w), w), alpha)) {
                        ok = false;
                        why = "local roundtrip failed at precision " + std::to_string(prec);
                    }
                }
            }
        }
        report(3, ok,
               "Hilbert 90 round-trip: 100 coboundaries per backend, local re-run at doubled "
               "precision (" +
                   std::to_string(seconds_since(t0)) + " s)" + (why.empty() ? "" : " [" + why + "]"));
    }

    // ---- criterion 5: Corollary 1 spot cases ----
    {
        bool ok = true;
        std::string why;
        try {
            auto ctx = local::make_K(local::make_base(3, 2), "3");
            tower::JPresentation pres = tower::build_J(*ctx);
            structure::InvariantProfile inv = local::norm_group_profile(*ctx, pres);
            structure::Corollary1Result c1 = structure::corollary1_checks(*ctx, pres, inv);
            gmodule::MultiplicityVector expect(2, {0, 1});
            if (c1.freeness != structure::Tri::yes ||
                !(gmodule::jordan_multiplicities(pres.module) == expect)) {
                ok = false;
                why = "Q_3(sqrt 3) not reported free with profile {2:1}";
            }

            structure::Corollary1Result qi = structure::corollary1_checks_quadratic(-1);
            if (qi.freeness != structure::Tri::no ||
                quadratic::minus_one_is_norm(-1).is_norm ||
                quadratic::is_norm(quadratic::Rational(3), -1).is_norm ||
                quadratic::is_norm(quadratic::Rational(-3), -1).is_norm) {
                ok = false;
                why = "Q(i) freeness analysis wrong";
            }

            auto d2 = quadratic::minus_one_is_norm(2);
            if (!d2.is_norm || !d2.witness || !(d2.witness->first == quadratic::Rational(1)) ||
                !(d2.witness->second == quadratic::Rational(1))) {
                ok = false;
                why = "Q(sqrt 2) upsilon witness wrong";
            }
        } catch (const error& e) {
            ok = false;
            why = e.what();
        }
        report(5, ok,
               std::string("Corollary 1 spot cases: Q_3(sqrt 3) free {2:1}; Q(i) not free with "
                           "3 outside N ∪ -N; Q(sqrt 2) has witness (1,1)") +
                   (why.empty() ? "" : " [" + why + "]"));
    }

    // ---- criterion 7: module-engine fuzzing ----
    {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::size_t total = 0;
        for (unsigned p : {2u, 3u, 5u}) {
            cli::RandomSummary s = cli::run_random(p, 20, 500, 0xACC7 + p);
            total += s.trials;
            ok = ok && s.failures == 0;
        }
        double dt = seconds_since(t0);
        ok = ok && dt < 120.0;
        report(7, ok,
               "module fuzzing: " + std::to_string(total) +
                   " seeded modules (dim 20), decompose + verify + profile round-trip + norm "
                   "identity, " +
                   std::to_string(dt) + " s");
    }

    // ---- criterion 8: Hilbert reciprocity on 50 random pairs ----
    {
        bool ok = true;
        std::mt19937_64 eng(0x51AB);
        int done = 0;
        while (done < 50) {
            long long b = (long long)(eng() % 4001) - 2000;
            long long c = (long long)(eng() % 4001) - 2000;
            if (b == 0 || c == 0) continue;
            int prod = quadratic::hilbert_symbol(quadratic::Rational(b), quadratic::Rational(c),
                                                 quadratic::Place::real_place());
            std::set<long long> primes{2};
            for (auto [q, e] : quadratic::factorize(b)) primes.insert(q);
            for (auto [q, e] : quadratic::factorize(c)) primes.insert(q);
            for (long long q : primes) {
                prod *= quadratic::hilbert_symbol(quadratic::Rational(b), quadratic::Rational(c),
                                                  quadratic::Place::at(q));
            }
            if (prod != 1) ok = false;
            ++done;
        }
        report(8, ok, "Hilbert-symbol product over all places = +1 for 50 random pairs");
    }

    std::printf("%s  acceptance: %d failure(s), %.1f s total\n", g_failures ? "FAIL" : "PASS",
                g_failures, seconds_since(t_all));
    return g_failures ? 1 : 0;
}
