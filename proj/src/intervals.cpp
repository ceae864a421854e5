#include "absnorm/intervals.hpp"

#include <cmath>
#include <stdexcept>

namespace absnorm {

namespace {

// Least m with base^m >= target (target >= 1), starting from an estimate.
std::uint64_t least_power_at_least(std::uint32_t base, const Integer& target) {
    const double bits = static_cast<double>(mpz_sizeinbase(target.get_mpz_t(), 2));
    auto m = static_cast<std::uint64_t>(std::max(0.0, std::floor((bits - 1) / std::log2(base)) - 1));
    Integer power = pow_int(base, m);
    while (power < target) {
        power *= base;
        ++m;
    }
    while (m > 0) {
        Integer smaller = power / base;
        if (smaller < target) break;
        power = smaller;
        --m;
    }
    return m;
}

// Depth-m b-adic cells are compared against [num_l/den_l, num_r/den_r).
bool single_cell(const Integer& num_l, const Integer& den_l, const Integer& num_r,
                 const Integer& den_r, std::uint32_t base, std::uint64_t n, Integer* cell) {
    const Integer scale = pow_int(base, n);
    Integer lo = floor_div(num_l * scale, den_l);
    Integer hi = ceil_div(num_r * scale, den_r) - 1;
    if (lo != hi) return false;
    if (cell) *cell = lo;
    return true;
}

DigitBlock determined_from_fractions(const Integer& num_l, const Integer& den_l,
                                     const Integer& num_r, const Integer& den_r,
                                     std::uint32_t base) {
    // A determined length-n prefix needs b^-n >= mu, so n <= log_b(1/mu).
    const Integer width_num = num_r * den_l - num_l * den_r;
    const Integer width_den = den_l * den_r;
    std::uint64_t hi = least_power_at_least(base, ceil_div(width_den, width_num));
    std::uint64_t lo = 0;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (single_cell(num_l, den_l, num_r, den_r, base, mid, nullptr)) lo = mid;
        else hi = mid - 1;
    }
    Integer cell;
    single_cell(num_l, den_l, num_r, den_r, base, lo, &cell);
    return DigitBlock::from_integer(base, cell, lo);
}

}  // namespace

RatInterval::RatInterval(Rational left, Rational right)
    : left_(std::move(left)), right_(std::move(right)) {
    left_.canonicalize();
    right_.canonicalize();
    if (!(0 <= left_ && left_ < right_ && right_ <= 1)) {
        throw std::invalid_argument("interval must satisfy 0 <= left < right <= 1");
    }
}

BadicInterval::BadicInterval(std::uint32_t base, std::uint64_t depth, Integer index)
    : base_(base), depth_(depth), index_(std::move(index)) {
    if (base_ < 2) throw std::invalid_argument("base must be at least 2");
    if (index_ < 0) throw std::invalid_argument("b-adic index must be nonnegative");
    if (index_ == 0) return;
    // sizeinbase is exact or one too large.
    const std::size_t digits = mpz_sizeinbase(index_.get_mpz_t(), static_cast<int>(std::min(base_, 62u)));
    const bool exact_needed = base_ > 62 || digits == depth_ + 1;
    if (exact_needed ? index_ >= pow_int(base_, depth_) : digits > depth_) {
        throw std::invalid_argument("b-adic index out of range");
    }
}

Rational BadicInterval::left() const { return make_rational(index_, pow_int(base_, depth_)); }
Rational BadicInterval::right() const { return make_rational(index_ + 1, pow_int(base_, depth_)); }

std::ostream& operator<<(std::ostream& os, const RatInterval& I) {
    return os << '[' << I.left() << ", " << I.right() << ')';
}

std::ostream& operator<<(std::ostream& os, const BadicInterval& I) {
    return os << '[' << I.index() << '/' << I.base() << '^' << I.depth() << ", " << (I.index() + 1)
              << '/' << I.base() << '^' << I.depth() << ')';
}

Rational measure(const RatInterval& I) { return I.right() - I.left(); }
Rational measure(const BadicInterval& I) { return Rational(1) / pow_int(I.base(), I.depth()); }

bool contains(const RatInterval& outer, const RatInterval& inner) {
    return outer.left() <= inner.left() && inner.right() <= outer.right();
}

bool contains(const BadicInterval& outer, const BadicInterval& inner) {
    // outer.left <= inner.left  and  inner.right <= outer.right, cross-multiplied.
    const Integer po = pow_int(outer.base(), outer.depth());
    const Integer pi = pow_int(inner.base(), inner.depth());
    return outer.index() * pi <= inner.index() * po &&
           (inner.index() + 1) * po <= (outer.index() + 1) * pi;
}

BadicInterval interval_of(const DigitBlock& x) {
    return BadicInterval(x.base(), x.size(), x.to_integer());
}

DigitBlock block_of(const BadicInterval& I) {
    return DigitBlock::from_integer(I.base(), I.index(), I.depth());
}

std::uint64_t subinterval_depth(const Rational& mu, std::uint32_t base) {
    if (base < 2) throw std::invalid_argument("base must be at least 2");
    if (mu <= 0 || mu > 1) throw std::invalid_argument("measure must lie in (0, 1]");
    // b^m >= 2/mu
    return least_power_at_least(base, ceil_div(2 * mu.get_den(), mu.get_num()));
}

std::uint64_t badic_subinterval_depth(std::uint32_t outer_base, std::uint64_t outer_depth,
                                      std::uint32_t base) {
    if (base < 2 || outer_base < 2) throw std::invalid_argument("base must be at least 2");
    if (base == outer_base) return outer_depth + 1;
    return least_power_at_least(base, 2 * pow_int(outer_base, outer_depth));
}

BadicInterval leftmost_aligned(const Rational& left, const Rational& right, std::uint32_t base,
                               std::uint64_t depth) {
    const Integer scale = pow_int(base, depth);
    Integer index = ceil_div(left.get_num() * scale, left.get_den());
    if ((index + 1) * right.get_den() > right.get_num() * scale) {
        throw InternalError("no aligned subinterval of the requested depth");
    }
    return BadicInterval(base, depth, index);
}

BadicInterval leftmost_badic_subinterval(const RatInterval& I, std::uint32_t base) {
    const std::uint64_t m = subinterval_depth(measure(I), base);
    return leftmost_aligned(I.left(), I.right(), base, m);
}

BadicInterval leftmost_badic_subinterval(const BadicInterval& I, std::uint32_t base) {
    if (base < 2) throw std::invalid_argument("base must be at least 2");
    const Integer outer_scale = pow_int(I.base(), I.depth());
    if (base == I.base()) return BadicInterval(base, I.depth() + 1, I.index() * base);
    const std::uint64_t m = badic_subinterval_depth(I.base(), I.depth(), base);
    const Integer scale = pow_int(base, m);
    Integer index = ceil_div(I.index() * scale, outer_scale);
    if ((index + 1) * outer_scale > (I.index() + 1) * scale) {
        throw InternalError("no aligned subinterval of the requested depth");
    }
    return BadicInterval(base, m, index);
}

DigitBlock determined_digits(const RatInterval& I, std::uint32_t base) {
    if (base < 2) throw std::invalid_argument("base must be at least 2");
    return determined_from_fractions(I.left().get_num(), I.left().get_den(), I.right().get_num(),
                                     I.right().get_den(), base);
}

DigitBlock determined_digits(const BadicInterval& I, std::uint32_t base) {
    if (base == I.base()) return block_of(I);
    const Integer scale = pow_int(I.base(), I.depth());
    return determined_from_fractions(I.index(), scale, I.index() + 1, scale, base);
}

}  // namespace absnorm
