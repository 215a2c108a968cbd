// One line per acceptance criterion: PASS/FAIL, wall time against its limit,
// and the measured quantities. Exit 0 iff every criterion passes.

#include "oracle.hpp"
#include "qfw/suites.hpp"

#include <bit>
#include <chrono>
#include <cstdio>
#include <iostream>

using namespace qfw;
using suites::json;

namespace {

struct Criterion {
    int id;
    const char* suite;
    double limit_s;
    json params;
    // extra checks against the test oracles; returns failure messages
    std::function<std::vector<std::string>(const suites::SuiteResult&)> extra;
};

std::vector<std::string> jordan_holder_oracle(const suites::SuiteResult& r) {
    std::vector<std::string> bad;
    for (std::uint64_t n = 1; n <= 10000; ++n)
        if (oracle::big_omega(n) != suites::big_omega(n)) bad.push_back("Omega(" + std::to_string(n) + ")");
    if (r.measured.value("lattices", 0) != 10000) bad.push_back("not every n <= 10^4 was checked");
    return bad;
}

std::vector<std::string> additivity_oracle(const suites::SuiteResult&) {
    std::vector<std::string> bad;
    for (unsigned d = 1; d <= 4; ++d) {
        const auto V = oracle::subspace_lattice_f2(d);
        std::uint64_t count = 0;
        for (unsigned k = 0; k <= d; ++k) count += oracle::gaussian_binomial(d, k, 2);
        if (V.size() != count) bad.push_back("F_2^" + std::to_string(d) + " has the wrong number of subspaces");
        // labels are member bitmasks: dimension is log2 of the member count
        auto dim = [&](Elem x) { return std::bit_width(static_cast<unsigned>(std::popcount(std::stoull(V.label(x), nullptr, 16)))) - 1; };
        for (Elem x = 0; x < V.size(); ++x) {
            if (V.height(x) != static_cast<std::size_t>(dim(x))) bad.push_back("height differs from dimension");
            for (Elem y = 0; y < V.size(); ++y)
                if (dim(V.join(x, y)) + dim(V.meet(x, y)) != dim(x) + dim(y)) bad.push_back("oracle additivity");
        }
    }
    return bad;
}

std::vector<std::string> dimension_oracle(const suites::SuiteResult& r) {
    std::vector<std::string> bad;
    oracle::ChainDims slow;
    std::size_t compared = 0;
    for (const auto& c : r.measured.at("chains")) {
        const auto alpha = Ordinal::parse(c.at("alpha").get<std::string>());
        int j = 0, m = 0;
        for (const auto& t : alpha.terms()) (t.exp == 1 ? j : m) = static_cast<int>(t.coef);
        const auto k = slow.krull({j, m}), g = slow.gabriel({j, m});
        if (c.at("krull").get<std::string>() != std::to_string(k) || c.at("gabriel").get<std::string>() != std::to_string(g))
            bad.push_back(alpha.to_string() + ": closed " + c.at("krull").get<std::string>() + "/" + c.at("gabriel").get<std::string>() +
                          " vs direct " + std::to_string(k) + "/" + std::to_string(g));
        ++compared;
    }
    // w*j + m for j <= 2, m <= 4, plus w*3
    if (compared != 16) bad.push_back("compared " + std::to_string(compared) + " chains");
    return bad;
}

std::vector<std::string> at_least(const suites::SuiteResult& r, const char* key, std::uint64_t n) {
    if (r.measured.value(key, std::uint64_t{0}) >= n) return {};
    return {std::string(key) + " below " + std::to_string(n)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "jordan-holder", 10, {{"max_n", 10000}}, jordan_holder_oracle},
        {2, "length-additivity", 30, {{"max_d", 4}, {"max_n", 1000}}, additivity_oracle},
        {3, "quotients", 10, {{"count", 200}, {"max_elements", 12}}, {}},
        {4, "dimension", 10, {{"max_omega", 3}, {"max_finite", 4}}, dimension_oracle},
        {5, "torsion", 30, {{"max_d", 3}}, {}},
        {6, "good-points", 60, {{"min_instances", 50}},
         [](const suites::SuiteResult& r) {
             std::vector<std::string> bad;
             const auto& z = r.measured.at("z500");
             if (z.at("Vbar") != 500) bad.push_back("Z/500: |Vbar| != 500");
             if (z.at("W").get<std::size_t>() < 50) bad.push_back("Z/500: |W| < 50");
             return bad;
         }},
        {7, "exclusivity", 300, {{"max_n", 4}, {"min_instances", 500}}, [](const auto& r) { return at_least(r, "instances", 500); }},
        {8, "replay", 120, {{"max_n", 4}, {"noisy", 4}, {"noisy_copies", 300}}, [](const auto& r) { return at_least(r, "noisy", 1); }},
        {9, "surjunctivity", 300, {{"mode", "exhaustive"}}, {}},
        {10, "stable-finiteness", 300, {{"samples", 100000}},
         [](const suites::SuiteResult& r) {
             const auto& reps = r.measured.at("reports");
             if (reps.size() == 3 && reps[2].at("checked") == 100000 && reps[1].at("exhaustive") == true) return std::vector<std::string>{};
             return std::vector<std::string>{"unexpected scan sizes"};
         }},
        {11, "duality", 30, {{"random_checks", 1000}},
         [](const suites::SuiteResult& r) {
             if (r.measured.at("anti_iso").at("composition_checks") == 16 && r.measured.at("random_checks") == 1000) return std::vector<std::string>{};
             return std::vector<std::string>{"wrong check counts"};
         }},
        {12, "lifts", 60, {{"max_n", 4}}, [](const auto& r) { return at_least(r, "endomorphisms", 1); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        auto r = suites::run_suite(c.suite, {20240601, Caps{}, c.params});
        if (c.extra)
            for (auto& f : c.extra(r)) r.fail("oracle: " + f);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit_s;
        const bool pass = r.ok && in_time;
        failed += !pass;
        auto measured = r.measured;
        for (const char* bulky : {"shapes", "chains", "reports", "anti_iso", "z500"})
            if (measured.contains(bulky)) measured.erase(bulky);
        std::printf("%s  %2d %-18s %7.2fs / %4.0fs  %s\n", pass ? "PASS" : "FAIL", c.id, c.suite, secs, c.limit_s, measured.dump().c_str());
        for (const auto& f : r.failures) std::printf("      %s\n", f.c_str());
        if (!in_time) std::printf("      over the time limit\n");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
