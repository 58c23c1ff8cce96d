// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ellcon/cli.hpp"
#include "ellcon/suites.hpp"

using namespace ellcon;

namespace {

constexpr std::uint64_t kSeed = 20260101;

struct Criterion {
    int id;
    std::string title;
    std::function<SuiteResult()> run;
};

/// Worst metric by value / tolerance, for the summary line.
std::string worst(const SuiteResult& r) {
    const Metric* w = nullptr;
    double ratio = -1;
    for (const Metric& m : r.metrics) {
        const double q = m.tolerance > 0 ? m.value / m.tolerance : m.value;
        if (!m.passed()) return m.name + " = " + std::to_string(m.value) + " (tol " + std::to_string(m.tolerance) + ")";
        if (q > ratio) ratio = q, w = &m;
    }
    if (!w) return "no metrics";
    char buf[256];
    std::snprintf(buf, sizeof buf, "worst %s = %.3g (tol %.3g)", w->name.c_str(), w->value, w->tolerance);
    return buf;
}

SuiteResult determinism() {
    cli::Options o;
    o.seed = kSeed;
    o.trials = 20;
    const std::string a = cli::to_json(cli::execute("suite", std::nullopt, o), false);
    const std::string b = cli::to_json(cli::execute("suite", std::nullopt, o), false);
    SuiteResult r{"determinism", {}};
    r.metrics.push_back({"reports differ", a == b && !a.empty() ? 0.0 : 1.0, 0.5, "identical bytes"});
    return r;
}

}  // namespace

int main() {
    const std::vector<Criterion> all{
        {1, "residue table", [] { return suite_residue_table(kSeed + 1); }},
        {2, "apparentness", [] { return suite_apparentness(kSeed + 2, 100); }},
        {3, "par bijection", [] { return suite_par(kSeed + 3, 100); }},
        {4, "transition and splitting", [] { return suite_transition(kSeed + 4, 100); }},
        {5, "symplectic", [] { return suite_symplectic(kSeed + 5, 100); }},
        {6, "stability", [] { return suite_stability(kSeed + 6); }},
        {7, "eigenvalue calculus", [] { return suite_eigenvalue_calculus(kSeed + 7); }},
        {8, "apparent map", [] { return suite_apparent_map(kSeed + 8, 50); }},
        {9, "algebra foundation", [] { return suite_algebra(kSeed + 9); }},
        {10, "determinism", determinism},
    };
    int failed = 0;
    for (const Criterion& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string detail;
        try {
            const SuiteResult r = c.run();
            ok = r.passed();
            detail = worst(r);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %d: %s [%s, %.1fs]\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), detail.c_str(), secs);
        failed += !ok;
    }
    return failed ? 1 : 0;
}
