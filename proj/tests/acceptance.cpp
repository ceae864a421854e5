// Acceptance checks, one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "absnorm/certified.hpp"
#include "absnorm/discrepancy.hpp"
#include "absnorm/intervals.hpp"
#include "absnorm/parameters.hpp"
#include "absnorm/pipeline.hpp"
#include "absnorm/reduction.hpp"
#include "absnorm/refine.hpp"
#include "absnorm/trace.hpp"
#include "helpers.hpp"

using namespace absnorm;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename F>
void run(int criterion, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(criterion, false, std::string("exception: ") + e.what());
    }
}

void discrepancy_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    int mismatches = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const unsigned b = 2 + rep % 3;
        const unsigned ell = 1 + (rep / 3) % 3;
        const auto u = oracle::random_digits(rng, b, 1 + rng() % 200);
        if (block_discrepancy(testing::block(b, u), ell) != oracle::block_discrepancy_enumerated(u, b, ell)) {
            ++mismatches;
        }
    }
    const double s = seconds_since(t0);
    report(1, mismatches == 0 && s < 60,
           "1000 blocks, " + std::to_string(mismatches) + " mismatches, " + std::to_string(s) + " s");
}

void concatenation_bound() {
    std::mt19937_64 rng(1002);
    int violations = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        const unsigned b = 2 + rng() % 4;
        std::vector<DigitBlock> parts;
        oracle::Digits all;
        const int n = 1 + static_cast<int>(rng() % 8);
        for (int k = 0; k < n; ++k) {
            const auto u = oracle::random_digits(rng, b, 1 + rng() % 30);
            all.insert(all.end(), u.begin(), u.end());
            parts.push_back(testing::block(b, u));
        }
        const Rational d = oracle::simple_discrepancy(all, b);
        if (d != simple_discrepancy(concat(parts)) || d > concat_bound(parts)) ++violations;
    }
    report(2, violations == 0, "10000 tuples, " + std::to_string(violations) + " violations");
}

void subinterval_contract() {
    std::mt19937_64 rng(1003);
    int violations = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        RatInterval I(0, 1);
        for (;;) {
            const unsigned long d1 = 1 + rng() % 60, d2 = 1 + rng() % 60;
            const Rational l = make_rational(rng() % (d1 + 1), d1);
            const Rational r = make_rational(rng() % (d2 + 1), d2);
            if (l < r) {
                I = RatInterval(l, r);
                break;
            }
        }
        const unsigned b = 2 + rng() % 9;
        const BadicInterval J = leftmost_badic_subinterval(I, b);
        const oracle::Cell expect = oracle::leftmost_cell(I.left(), I.right(), b);
        const bool ok = J.base() == b && contains(I, J.as_rational()) && measure(J) >= measure(I) / (2 * b) &&
                        testing::cell(J) == expect &&
                        (expect.depth == 0 || oracle::mk(1, oracle::zpow(b, expect.depth - 1)) > measure(I) / 2);
        if (!ok) ++violations;
    }
    report(3, violations == 0, "1000 intervals, " + std::to_string(violations) + " violations");
}

void parameter_table() {
    struct Row {
        std::uint64_t i;
        const char* delta;
        std::uint64_t k, ell;
    };
    const ParamTable params;
    bool ok = true;
    std::string detail;
    for (const Row& row : {Row{1, "1/4", 188, 190}, Row{2, "1/144", 755, 1518}, Row{3, "1/9216", 1890, 3794}}) {
        const std::uint64_t ka = compute_k(row.i, LnMethod::AtanhSeries);
        const std::uint64_t kb = compute_k(row.i, LnMethod::ExpBisection);
        ok = ok && params.delta(row.i) == parse_fraction(row.delta) && ka == row.k && kb == row.k &&
             params.k(row.i) == row.k && params.ell(row.i) == row.ell;
        detail += "i=" + std::to_string(row.i) + ": delta=" + params.delta(row.i).get_str() +
                  " k=" + std::to_string(ka) + "/" + std::to_string(kb) + " ell=" + std::to_string(params.ell(row.i)) + "; ";
    }
    report(4, ok, detail);
}

void first_refinement() {
    const auto t0 = Clock::now();
    const ParamTable params;
    const RefineResult r = refine(TSequence::unit(), 1, params);
    const double s = seconds_since(t0);
    const DigitBlock& x2 = r.output.x(2);
    DigitCounter c(2);
    c.add(x2);
    bool steps_ok = true;
    for (const auto& rec : r.trace) {
        const DigitBlock& u = rec.u_of(2);
        steps_ok = steps_ok && suitable_extension(u, 1) && u.size() > params.k(1) && u.size() <= params.ell(1) &&
                   std::any_of(u.digits().begin(), u.digits().end(), [](Digit d) { return d != 0; });
    }
    const bool ok = x2.size() > 6072 && c.discrepancy_at_most(2, 3) && steps_ok &&
                    check_refinement_guarantees(TSequence::unit(), r, params).ok() && s <= 60;
    report(5, ok, "|x_2| = " + std::to_string(x2.size()) + ", D = " + c.simple_discrepancy().get_str() + ", " +
                      std::to_string(r.trace.size()) + " steps, " + std::to_string(s) + " s");
}

struct PipelineRun {
    std::string digits;
    std::string trace;
    std::vector<std::string> violations;
    double seconds = 0;
};

PipelineRun three_rounds() {
    const auto t0 = Clock::now();
    const ParamTable params;
    PipelineRun out;
    std::ostringstream trace;
    TraceWriter writer(trace, params);
    PipelineState state = PipelineState::start({2});
    for (std::uint64_t f : {1, 2, 3}) {
        AdvanceOutcome next = lambda_ref_advance(state, f, params);
        writer.write_round(next.state.round, next.result);
        const auto rep = check_refinement_guarantees(state.current, next.result, params, 16);
        for (const auto& v : rep.violations) out.violations.push_back("round " + std::to_string(f) + ": " + v);
        if (rep.refused) out.violations.push_back("round " + std::to_string(f) + ": refused");
        state = std::move(next.state);
    }
    out.digits = state.emitted.at(2).to_string();
    out.trace = trace.str();
    out.seconds = seconds_since(t0);
    return out;
}

void reduction_checks() {
    bool ok = true;
    std::string detail;
    FirstReductionStream yes(Predicate::constant(true));
    const auto t = take(yes, 10000);
    ok = ok && t == oracle::simulate_first_reduction([](auto, auto) { return true; }, 10000);
    FirstReductionStream no(Predicate::constant(false));
    const auto f = take(no, 10000);
    ok = ok && f == oracle::simulate_false_reduction(10000);
    for (const auto* seq : {&t, &f}) {
        std::set<std::uint64_t> seen;
        std::uint64_t next_new = 1;
        for (auto v : *seq) {
            if (seen.insert(v).second && v != next_new++) ok = false;
        }
    }
    detail += ok ? "prefixes match, first occurrences in order; " : "prefix or order mismatch; ";
    std::vector<bool> hit(std::size_t(1) << 20, false);
    bool bijective = true;
    for (std::uint64_t n = 1; n <= (1u << 20); ++n) {
        const Pair p = pair_decode(n);
        const auto [x, y] = oracle::decode(n);
        if (p != Pair{x, y} || pair_encode(p) != n) bijective = false;
        // Every pair with code <= 2^20 is hit exactly once.
        const std::uint64_t code = pair_encode(p);
        if (code > hit.size() || hit[code - 1]) bijective = false;
        else hit[code - 1] = true;
    }
    detail += bijective ? "decode bijective on 1..2^20" : "decode not bijective";
    report(7, ok && bijective, detail);
}

void tail_bounds() {
    bool ok = true;
    std::string detail;
    for (auto [b, k, eps] : {std::tuple{2u, 30ul, "1/5"}, std::tuple{2u, 36ul, "1/6"}, std::tuple{3u, 30ul, "1/5"}}) {
        const Rational e = parse_fraction(eps);
        const auto rep = tail_bound_check(b, k, e);
        const auto [lower, upper] = oracle::tails(b, k, e);
        const Rational x = Rational(b) * e * e * Rational(static_cast<unsigned long>(k)) / 6;
        const Rational rhs_low = Rational(oracle::zpow(b, k)) * oracle::exp_neg_lower(x);
        const bool row = rep.holds && rep.lower_tail == lower && rep.upper_tail == upper && lower <= rhs_low &&
                         upper <= rhs_low;
        ok = ok && row;
        detail += "(" + std::to_string(b) + "," + std::to_string(k) + "," + eps + ") " + (row ? "holds" : "fails") + "; ";
    }
    report(8, ok, detail);
}

void toy_oracle() {
    const ParamTable toy(ToyOverride{2, 8});
    std::mt19937_64 rng(1009);
    int mismatches = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const unsigned long d = rng() % 25;
        const oracle::Z idx = oracle::Z(static_cast<unsigned long>(rng())) % oracle::zpow(2, d);
        const TSequence input({BadicInterval(2, d, idx)});
        const RefineResult r = refine(input, 1, toy);
        const oracle::RefRun ref = oracle::refine_reference(testing::cells(input), 1, 2, 8);
        bool same = testing::cells(r.output) == ref.output && testing::digits(r.v_of(2)) == ref.v[0] &&
                    r.trace.size() == ref.steps.size();
        for (std::size_t s = 0; same && s < ref.steps.size(); ++s) {
            const auto& a = r.trace[s];
            const auto& b = ref.steps[s];
            same = a.scanned == b.scanned && testing::digits(a.u_of(2)) == b.u[0] &&
                   a.u_discrepancy[0] == b.u_discrepancy[0] && a.x_length[0] == b.x_length[0];
        }
        if (!same) ++mismatches;
    }
    report(9, mismatches == 0, "50 starts, " + std::to_string(mismatches) + " mismatches");
}

}  // namespace

int main() {
    run(1, discrepancy_oracle);
    run(2, concatenation_bound);
    run(3, subinterval_contract);
    run(4, parameter_table);
    run(5, first_refinement);
    PipelineRun first, second;
    bool have_first = false;
    run(6, [&] {
        first = three_rounds();
        have_first = true;
        const bool ok = first.violations.empty() && first.digits.size() > 30000 && first.seconds <= 600;
        for (const auto& v : first.violations) std::cout << "  " << v << "\n";
        report(6, ok, std::to_string(first.digits.size()) + " base-2 digits, " +
                          std::to_string(first.violations.size()) + " violations, " + std::to_string(first.seconds) + " s");
    });
    run(7, reduction_checks);
    run(8, tail_bounds);
    run(9, toy_oracle);
    run(10, [&] {
        if (!have_first) throw std::runtime_error("criterion 6 did not complete");
        second = three_rounds();
        const bool ok = first.digits == second.digits && first.trace == second.trace;
        report(10, ok, "digits " + std::string(first.digits == second.digits ? "identical" : "differ") + ", traces " +
                           (first.trace == second.trace ? "identical" : "differ") + " (" +
                           std::to_string(first.trace.size()) + " trace bytes)");
    });
    return failures == 0 ? 0 : 1;
}
