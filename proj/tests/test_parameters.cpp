#include <doctest.h>

#include <thread>

#include "absnorm/certified.hpp"
#include "absnorm/parameters.hpp"
#include "helpers.hpp"

using namespace absnorm;
using testing::q;

namespace {

struct Expected {
    std::uint64_t i, k, ell;
};

}  // namespace

TEST_CASE("delta examples") {
    CHECK(delta(1) == q("1/4"));
    CHECK(delta(2) == q("1/144"));
    CHECK(delta(3) == q("1/9216"));
    CHECK(inverse_delta(3) == 9216);
    CHECK_THROWS_AS(delta(0), std::invalid_argument);
    for (std::uint64_t i = 1; i <= 12; ++i) {
        oracle::Z f = 1;
        for (unsigned long k = 2; k <= i + 1; ++k) f *= k;
        CHECK(delta(i) == oracle::mk(1, oracle::zpow(2, 2 * i - 2) * f * f));
    }
}

TEST_CASE("k and ell examples") {
    for (auto [i, k, ell] : {Expected{1, 188, 190}, Expected{2, 755, 1518}, Expected{3, 1890, 3794}}) {
        CHECK(compute_k(i, LnMethod::AtanhSeries) == k);
        CHECK(compute_k(i, LnMethod::ExpBisection) == k);
        const ParamTable table;
        CHECK(table.k(i) == k);
        CHECK(table.ell(i) == ell);
        CHECK(table.conforming());
    }
}

TEST_CASE("both logarithm methods agree on k up to i = 8") {
    for (std::uint64_t i = 1; i <= 8; ++i) {
        const std::uint64_t a = compute_k(i, LnMethod::AtanhSeries);
        CHECK(a == compute_k(i, LnMethod::ExpBisection));
        CHECK(a > 6 * (i + 2));
    }
}

TEST_CASE("k is the least integer above the bound") {
    for (std::uint64_t i = 1; i <= 8; ++i) {
        const std::uint64_t k = compute_k(i);
        const Integer n = Integer(2 * (i + 1) * (i + 1)) * inverse_delta(i);
        const Enclosure ln = ln_enclosure(n, q("1/1000000000000"), LnMethod::AtanhSeries);
        const Rational c = Rational(static_cast<unsigned long>(6 * (i + 2) * (i + 2)));
        const Rational lower = c * ln.lo, upper = c * ln.hi;
        CHECK(Rational(static_cast<unsigned long>(k)) > upper);
        CHECK(Rational(static_cast<unsigned long>(k - 1)) <= lower);
    }
}

TEST_CASE("logarithm and exponential enclosures") {
    // ln 2 = 0.693147180559945309417232121458...
    const Rational ln2_lo = q("693147180559945309417232121458/1000000000000000000000000000000");
    const Rational ln2_hi = ln2_lo + q("1/1000000000000000000000000000000");
    for (auto method : {LnMethod::AtanhSeries, LnMethod::ExpBisection}) {
        const Enclosure e = ln_enclosure(2, q("1/1000000000000000000000000000000000"), method);
        CHECK(e.lo <= ln2_hi);
        CHECK(e.hi >= ln2_lo);
        CHECK(e.width() <= q("1/1000000000000000000000000000000000"));
        const Enclosure one = ln_enclosure(1, q("1/1000"), method);
        CHECK(one.contains(0));
    }
    // e = 2.718281828459045235360287471352...
    const Enclosure e = exp_enclosure(1, q("1/1000000000000000000000000000000000"));
    CHECK(e.lo <= q("2718281828459045235360287471353/1000000000000000000000000000000"));
    CHECK(e.hi >= q("2718281828459045235360287471352/1000000000000000000000000000000"));
    CHECK(e.width() <= q("1/1000000000000000000000000000000000"));
    const Enclosure em = exp_enclosure(-3, q("1/1000000000000000000000000"));
    // e^-3 = 0.049787068367863942979342415650...
    CHECK(em.lo <= q("49787068367863942979342415651/1000000000000000000000000000000"));
    CHECK(em.hi >= q("49787068367863942979342415650/1000000000000000000000000000000"));
    CHECK_THROWS_AS(ln_enclosure(0, q("1/10"), LnMethod::AtanhSeries), std::invalid_argument);
}

TEST_CASE("ceil log2") {
    CHECK(ceil_log2(Integer(1)) == 0);
    CHECK(bits_per_digit(1) == 1);
    CHECK(bits_per_digit(3) == 2);
    CHECK(bits_per_digit(4) == 3);
    CHECK(delta_bits(1) == 2);
    CHECK(delta_bits(2) == 8);
    CHECK(delta_bits(3) == 14);
    for (unsigned long n = 2; n < 5000; ++n) {
        const std::uint64_t e = ceil_log2(Integer(n));
        CHECK(oracle::zpow(2, e) >= n);
        CHECK(oracle::zpow(2, e - 1) < n);
        CHECK(e == oracle::ceil_log2(n));
    }
    CHECK(ceil_log2(oracle::zpow(2, 300)) == 300);
    CHECK(ceil_log2(oracle::zpow(2, 300) + 1) == 301);
}

TEST_CASE("toy override is flagged and constant") {
    const ParamTable toy(ToyOverride{2, 8});
    CHECK_FALSE(toy.conforming());
    CHECK(toy.k(1) == 2);
    CHECK(toy.k(5) == 2);
    CHECK(toy.ell(3) == 8);
    CHECK(toy.step_bits(3) == 4);
    CHECK(toy.delta_bits(2) == 8);
    CHECK(toy.delta(2) == q("1/144"));
    const ParamTable copy = toy;
    CHECK_FALSE(copy.conforming());
}

TEST_CASE("memoized lookups are stable under concurrent readers") {
    const ParamTable table;
    std::vector<std::uint64_t> seen(8);
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < seen.size(); ++t) {
        threads.emplace_back([&, t] { seen[t] = table.k(1 + t % 4) * 10000 + table.ell(1 + t % 4); });
    }
    for (auto& th : threads) th.join();
    for (std::size_t t = 0; t < seen.size(); ++t) {
        CHECK(seen[t] == compute_k(1 + t % 4) * 10000 + table.ell(1 + t % 4));
    }
}
