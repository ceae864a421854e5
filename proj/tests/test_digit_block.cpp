#include <doctest.h>

#include <random>

#include "absnorm/digit_block.hpp"
#include "helpers.hpp"

using namespace absnorm;
using testing::blk;

TEST_CASE("digit blocks validate their digits") {
    CHECK_THROWS_AS(DigitBlock(1), std::invalid_argument);
    CHECK_THROWS_AS(DigitBlock(2, {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(blk(3, "013"), std::invalid_argument);
    CHECK_THROWS_AS(blk(40, "0"), std::invalid_argument);
    DigitBlock b(2);
    CHECK(b.empty());
    CHECK_THROWS_AS(b.push_back(2), std::invalid_argument);
    CHECK_THROWS_AS(b.append(blk(3, "0")), std::invalid_argument);
}

TEST_CASE("string and integer round trips") {
    CHECK(blk(16, "ff").to_integer() == 255);
    CHECK(blk(3, "120").to_integer() == 15);
    CHECK(DigitBlock::from_integer(3, 15, 5) == blk(3, "00120"));
    CHECK(DigitBlock::from_integer(2, 0, 0).empty());
    CHECK_THROWS_AS(DigitBlock::from_integer(2, 8, 3), std::invalid_argument);
    CHECK_THROWS_AS(DigitBlock::from_integer(2, -1, 3), std::invalid_argument);
    CHECK(blk(36, "zz09").to_string() == "zz09");
    CHECK(DigitBlock(100, {99, 0, 7}).to_string() == "99 0 7");

    std::mt19937_64 rng(1);
    for (std::uint32_t base : {2u, 3u, 7u, 10u, 36u, 61u, 62u, 63u, 100u, 1000u}) {
        const auto d = oracle::random_digits(rng, base, 1 + rng() % 700);
        const DigitBlock x = testing::block(base, d);
        Integer v = 0;
        for (unsigned digit : d) v = v * base + digit;
        CHECK(x.to_integer() == v);
        CHECK(DigitBlock::from_integer(base, v, d.size()) == x);
    }
}

TEST_CASE("slicing and prefixes") {
    const DigitBlock x = blk(2, "011010");
    CHECK(x.prefix(3) == blk(2, "011"));
    CHECK(x.slice(2, 5) == blk(2, "101"));
    CHECK(blk(2, "011").is_prefix_of(x));
    CHECK_FALSE(blk(2, "010").is_prefix_of(x));
    CHECK_FALSE(blk(3, "011").is_prefix_of(x));
    CHECK_THROWS(x.prefix(7));
    CHECK(concat(std::vector{blk(2, "01"), DigitBlock(2), blk(2, "1")}) == blk(2, "011"));
}
