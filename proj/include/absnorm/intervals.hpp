#ifndef ABSNORM_INTERVALS_HPP
#define ABSNORM_INTERVALS_HPP

#include <cstdint>
#include <ostream>

#include "absnorm/digit_block.hpp"
#include "absnorm/exact.hpp"

namespace absnorm {

/// Semi-open [left, right) with 0 <= left < right <= 1.
class RatInterval {
public:
    RatInterval(Rational left, Rational right);

    const Rational& left() const { return left_; }
    const Rational& right() const { return right_; }

    bool operator==(const RatInterval&) const = default;

private:
    Rational left_;
    Rational right_;
};

/// [index/base^depth, (index+1)/base^depth) with 0 <= index < base^depth.
class BadicInterval {
public:
    BadicInterval(std::uint32_t base, std::uint64_t depth, Integer index);

    /// [0, 1) viewed as a depth-0 interval in the given base.
    static BadicInterval unit(std::uint32_t base) { return BadicInterval(base, 0, 0); }

    std::uint32_t base() const { return base_; }
    std::uint64_t depth() const { return depth_; }
    const Integer& index() const { return index_; }

    Rational left() const;
    Rational right() const;
    RatInterval as_rational() const { return RatInterval(left(), right()); }

    bool operator==(const BadicInterval&) const = default;

private:
    std::uint32_t base_;
    std::uint64_t depth_;
    Integer index_;
};

std::ostream& operator<<(std::ostream& os, const RatInterval& I);
std::ostream& operator<<(std::ostream& os, const BadicInterval& I);

Rational measure(const RatInterval& I);
Rational measure(const BadicInterval& I);

/// outer.left <= inner.left and inner.right <= outer.right.
bool contains(const RatInterval& outer, const RatInterval& inner);
bool contains(const BadicInterval& outer, const BadicInterval& inner);

BadicInterval interval_of(const DigitBlock& x);
DigitBlock block_of(const BadicInterval& I);

/// Least m with base^-m <= mu/2, for 0 < mu <= 1.
std::uint64_t subinterval_depth(const Rational& mu, std::uint32_t base);

/// subinterval_depth for the measure outer_base^-outer_depth, without building the rational.
std::uint64_t badic_subinterval_depth(std::uint32_t outer_base, std::uint64_t outer_depth,
                                      std::uint32_t base);

/// The leftmost depth-m b-adic interval inside I, where m = subinterval_depth(mu(I), b).
/// Its measure exceeds mu(I)/(2b).
BadicInterval leftmost_badic_subinterval(const RatInterval& I, std::uint32_t base);
BadicInterval leftmost_badic_subinterval(const BadicInterval& I, std::uint32_t base);

/// Leftmost depth-m b-adic interval whose closure lies in [left, right), assuming one exists.
BadicInterval leftmost_aligned(const Rational& left, const Rational& right, std::uint32_t base,
                               std::uint64_t depth);

/// The longest base-b block x with I inside [.x, .x + b^-|x|).
DigitBlock determined_digits(const RatInterval& I, std::uint32_t base);
DigitBlock determined_digits(const BadicInterval& I, std::uint32_t base);

}  // namespace absnorm

#endif
