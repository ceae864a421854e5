#ifndef ABSNORM_PREDICATE_HPP
#define ABSNORM_PREDICATE_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "absnorm/exact.hpp"

namespace absnorm {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Evaluation failure such as a modulus by zero.
class PredicateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IntExpr {
    enum class Kind { Constant, X, Y, Add, Sub, Mul, Mod };
    Kind kind;
    Integer value;
    std::unique_ptr<IntExpr> lhs, rhs;
};

struct BoolExpr {
    enum class Kind { True, False, Compare, Divides, And, Or, Not };
    enum class Rel { Eq, Ne, Lt, Le, Gt, Ge };
    Kind kind;
    Rel rel = Rel::Eq;
    std::unique_ptr<IntExpr> a, b;
    std::unique_ptr<BoolExpr> lhs, rhs;
};

/// C(x, y) over positive integers x, y.
///
/// Grammar, loosest to tightest: `|`, `&`, `!`, then atoms `true`, `false`,
/// `sum rel sum`, `div(sum, sum)`, `(expr)`. Sums use `+ -`, terms `* %`,
/// factors are decimal integers, `x`, `y` or `(sum)`. `div(a, b)` holds when
/// b divides a; `a % b` is the remainder with the sign of b.
class Predicate {
public:
    static Predicate parse(std::string_view text);
    static Predicate constant(bool value);

    bool evaluate(std::uint64_t x, std::uint64_t y) const;

    /// Fully parenthesised canonical form.
    std::string to_string() const;

    const BoolExpr& root() const { return *root_; }

private:
    explicit Predicate(std::shared_ptr<const BoolExpr> root) : root_(std::move(root)) {}
    std::shared_ptr<const BoolExpr> root_;
};

inline Predicate parse_predicate(std::string_view text) { return Predicate::parse(text); }

}  // namespace absnorm

#endif
