#include <doctest.h>

#include <random>

#include "absnorm/intervals.hpp"
#include "helpers.hpp"

using namespace absnorm;
using testing::blk;
using testing::q;
using testing::ri;

namespace {

// Random [l, r) with denominators up to 60.
RatInterval random_interval(std::mt19937_64& rng) {
    for (;;) {
        const unsigned long d1 = 1 + rng() % 60, d2 = 1 + rng() % 60;
        const Rational l = make_rational(rng() % (d1 + 1), d1);
        const Rational r = make_rational(rng() % (d2 + 1), d2);
        if (l < r) return RatInterval(l, r);
    }
}

// Longest x with I inside its cell, by trying every cell of each depth.
oracle::Digits determined_exhaustive(const Rational& l, const Rational& r, unsigned b) {
    oracle::Digits best;
    for (unsigned long n = 1;; ++n) {
        const oracle::Z cells = oracle::zpow(b, n);
        bool found = false;
        for (oracle::Z a = 0; a < cells && !found; ++a) {
            if (oracle::mk(a, cells) <= l && r <= oracle::mk(a + 1, cells)) {
                best = oracle::digits_of(oracle::Cell{b, n, a});
                found = true;
            }
        }
        if (!found) return best;
    }
}

}  // namespace

TEST_CASE("interval_of examples") {
    CHECK(interval_of(blk(2, "011")).as_rational() == ri("3/8", "1/2"));
    CHECK(interval_of(DigitBlock(3)).as_rational() == ri("0", "1"));
    CHECK(interval_of(blk(3, "120")).as_rational() == ri("15/27", "16/27"));
    CHECK(interval_of(blk(3, "120")).depth() == 3);
}

TEST_CASE("block_of examples") {
    CHECK(block_of(BadicInterval(2, 3, 3)) == blk(2, "011"));
    CHECK(block_of(BadicInterval(5, 2, 0)) == blk(5, "00"));
    CHECK(block_of(BadicInterval(3, 3, 15)) == blk(3, "120"));
    CHECK_THROWS_AS(BadicInterval(2, 3, 8), std::invalid_argument);
    CHECK_THROWS_AS(BadicInterval(2, 3, -1), std::invalid_argument);
}

TEST_CASE("block and interval round trip") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 300; ++rep) {
        const unsigned b = 2 + rng() % 70;
        const auto d = oracle::random_digits(rng, b, rng() % 120);
        const DigitBlock x = testing::block(b, d);
        const BadicInterval I = interval_of(x);
        CHECK(block_of(I) == x);
        CHECK(interval_of(block_of(I)) == I);
        CHECK(testing::cell(I).left() == I.left());
        CHECK(testing::digits(block_of(I)) == oracle::digits_of(testing::cell(I)));
    }
}

TEST_CASE("measure and containment") {
    CHECK(measure(ri("3/8", "1/2")) == q("1/8"));
    CHECK(measure(BadicInterval(3, 2, 4)) == q("1/9"));
    CHECK(contains(ri("0", "1"), ri("3/8", "1/2")));
    CHECK_FALSE(contains(ri("3/8", "1/2"), ri("1/4", "3/8")));
    CHECK(contains(BadicInterval(2, 1, 0), BadicInterval(3, 2, 0)));
    CHECK_FALSE(contains(BadicInterval(2, 1, 0), BadicInterval(3, 1, 1)));
    CHECK_THROWS_AS(ri("1/2", "1/2"), std::invalid_argument);
    CHECK_THROWS_AS(ri("1/2", "3/2"), std::invalid_argument);
}

TEST_CASE("leftmost subinterval examples") {
    CHECK(leftmost_badic_subinterval(ri("1/3", "2/3"), 2).as_rational() == ri("3/8", "1/2"));
    CHECK(leftmost_badic_subinterval(ri("0", "1"), 3).as_rational() == ri("0", "1/3"));
    CHECK(leftmost_badic_subinterval(ri("0", "1/2"), 3).as_rational() == ri("0", "1/9"));
    CHECK(leftmost_badic_subinterval(BadicInterval(2, 1, 0), 3) == BadicInterval(3, 2, 0));
    CHECK(subinterval_depth(q("1/3"), 2) == 3);
    CHECK_THROWS_AS(subinterval_depth(q("0"), 2), std::invalid_argument);
}

TEST_CASE("leftmost subinterval contract against exhaustive search") {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 1000; ++rep) {
        const RatInterval I = random_interval(rng);
        const unsigned b = 2 + rng() % 9;
        const BadicInterval J = leftmost_badic_subinterval(I, b);
        const Rational mu = measure(I);
        CHECK(J.base() == b);
        CHECK(contains(I, J.as_rational()));
        CHECK(measure(J) >= mu / (2 * b));
        const oracle::Cell expect = oracle::leftmost_cell(I.left(), I.right(), b);
        CHECK(testing::cell(J) == expect);
        // depth m - 1 is excluded by the depth rule
        if (expect.depth > 0) CHECK(oracle::mk(1, oracle::zpow(b, expect.depth - 1)) > mu / 2);
        CHECK(oracle::mk(1, oracle::zpow(b, expect.depth)) <= mu / 2);
    }
}

TEST_CASE("b-adic depth rule without rationals") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 300; ++rep) {
        const unsigned a = 2 + rng() % 20, b = 2 + rng() % 20;
        const unsigned long d = rng() % 200;
        CHECK(badic_subinterval_depth(a, d, b) == oracle::least_depth(oracle::mk(1, oracle::zpow(a, d)), b));
    }
}

TEST_CASE("leftmost subinterval of a b-adic interval") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 300; ++rep) {
        const unsigned a = 2 + rng() % 8, b = 2 + rng() % 8;
        const unsigned long d = rng() % 40;
        const auto x = testing::block(a, oracle::random_digits(rng, a, d));
        const BadicInterval I = interval_of(x);
        const BadicInterval J = leftmost_badic_subinterval(I, b);
        CHECK(testing::cell(J) == oracle::leftmost_cell_direct(I.left(), I.right(), b));
        CHECK(J == leftmost_badic_subinterval(I.as_rational(), b));
    }
}

TEST_CASE("determined digits examples") {
    CHECK(determined_digits(ri("3/8", "1/2"), 10).empty());
    CHECK(determined_digits(ri("3/8", "25/64"), 10) == blk(10, "3"));
    CHECK(determined_digits(ri("3/8", "1/2"), 2) == blk(2, "011"));
    CHECK(determined_digits(BadicInterval(3, 3, 15), 3) == blk(3, "120"));
    // semi-open: [1/2 - eps, 1/2) only fixes a 0
    CHECK(determined_digits(ri("7/16", "1/2"), 2) == blk(2, "0111"));
}

TEST_CASE("determined digits against exhaustive search and monotonicity") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 400; ++rep) {
        const RatInterval I = random_interval(rng);
        const unsigned b = 2 + rng() % 9;
        const DigitBlock x = determined_digits(I, b);
        CHECK(testing::digits(x) == determined_exhaustive(I.left(), I.right(), b));
        const Rational w = I.right() - I.left();
        const Rational l2 = I.left() + w * make_rational(rng() % 50, 100);
        const Rational r2 = I.right() - w * make_rational(rng() % 50, 100);
        const DigitBlock y = determined_digits(RatInterval(l2, r2), b);
        CHECK(x.is_prefix_of(y));
    }
}

TEST_CASE("determined digits of b-adic intervals are their blocks") {
    std::mt19937_64 rng(19);
    for (int rep = 0; rep < 200; ++rep) {
        const unsigned b = 2 + rng() % 40;
        const auto x = testing::block(b, oracle::random_digits(rng, b, rng() % 50));
        CHECK(determined_digits(interval_of(x), b) == x);
        CHECK(determined_digits(interval_of(x).as_rational(), b) == x);
    }
}
