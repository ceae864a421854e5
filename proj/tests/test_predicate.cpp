#include <doctest.h>

#include "absnorm/predicate.hpp"

using namespace absnorm;

TEST_CASE("parse examples") {
    const Predicate f = parse_predicate("false");
    CHECK(f.root().kind == BoolExpr::Kind::False);
    const Predicate c = parse_predicate("x = 1 & div(y, 2)");
    CHECK(c.root().kind == BoolExpr::Kind::And);
    CHECK(c.root().rhs->kind == BoolExpr::Kind::Divides);
    const Predicate d = parse_predicate("y < 10 | !(x > 3)");
    CHECK(d.root().kind == BoolExpr::Kind::Or);
    CHECK(d.root().rhs->kind == BoolExpr::Kind::Not);
}

TEST_CASE("precedence and canonical form") {
    CHECK(parse_predicate("x = 1 | y = 2 & x = 3").to_string() == "((x = 1) | ((y = 2) & (x = 3)))");
    CHECK(parse_predicate("!x = 1 & true").to_string() == "(!(x = 1) & true)");
    CHECK(parse_predicate("x + 2 * y - 1 >= 3 % x").to_string() == "(((x + (2 * y)) - 1) >= (3 % x))");
    CHECK(parse_predicate("div(x+1,(y))").to_string() == "div((x + 1), y)");
    // Canonical text parses back to the same tree.
    for (const char* text : {"y < 10 | !(x > 3)", "x = 1 & div(y, 2)", "(x - y) % 7 != 0 | false"}) {
        const std::string once = parse_predicate(text).to_string();
        CHECK(parse_predicate(once).to_string() == once);
    }
}

TEST_CASE("evaluation") {
    const Predicate c = parse_predicate("x = 1 & div(y, 2)");
    CHECK(c.evaluate(1, 4));
    CHECK_FALSE(c.evaluate(1, 3));
    CHECK_FALSE(c.evaluate(2, 4));
    const Predicate d = parse_predicate("y < 10 | !(x > 3)");
    CHECK(d.evaluate(100, 9));
    CHECK(d.evaluate(3, 100));
    CHECK_FALSE(d.evaluate(4, 10));
    CHECK(parse_predicate("x - y % 3 = x - 2").evaluate(5, 5));
    CHECK(parse_predicate("(x - y) % 3 = 1").evaluate(1, 3));  // -2 mod 3 = 1
    CHECK(parse_predicate("div(0, x - x)").evaluate(4, 1));
    CHECK_FALSE(parse_predicate("div(y, x - x)").evaluate(4, 1));
    CHECK(parse_predicate("123456789012345678901234567890 < x * y * y * y").evaluate(1u << 31, 1u << 31));
    CHECK(Predicate::constant(true).evaluate(1, 1));
    CHECK_FALSE(Predicate::constant(false).evaluate(1, 1));
    for (std::uint64_t x = 1; x <= 20; ++x) {
        for (std::uint64_t y = 1; y <= 20; ++y) {
            CHECK(parse_predicate("div(x * y, 6) | x % 4 = y % 4").evaluate(x, y) ==
                  ((x * y) % 6 == 0 || x % 4 == y % 4));
        }
    }
}

TEST_CASE("modulus by zero is a runtime error") {
    const Predicate p = parse_predicate("x % (y - 1) = 0");
    CHECK_THROWS_AS(p.evaluate(3, 1), PredicateError);
    CHECK(p.evaluate(4, 3));
}

TEST_CASE("parse errors carry positions") {
    auto where = [](const char* text) {
        try {
            parse_predicate(text);
        } catch (const ParseError& e) {
            return std::pair{e.line(), e.column()};
        }
        return std::pair<std::size_t, std::size_t>{0, 0};
    };
    CHECK(where("x = z") == std::pair<std::size_t, std::size_t>{1, 5});
    CHECK(where("x = 1 &\n  y ? 2") == std::pair<std::size_t, std::size_t>{2, 5});
    CHECK(where("x < 1 < 2") == std::pair<std::size_t, std::size_t>{1, 7});
    CHECK(where("(x = 1") == std::pair<std::size_t, std::size_t>{1, 7});
    CHECK(where("") == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK(where("div(x)").first == 1);
    CHECK(where("x").first == 1);
    CHECK_THROWS_AS(parse_predicate("truex = 1"), ParseError);
}
