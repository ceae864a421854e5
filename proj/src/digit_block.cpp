#include "absnorm/digit_block.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace absnorm {

namespace {

constexpr std::string_view kDigitChars = "0123456789abcdefghijklmnopqrstuvwxyz";

void check_base(std::uint32_t base) {
    if (base < 2) throw std::invalid_argument("base must be at least 2");
}

// Appends the base-b digits of value (most significant first) padded to width.
void write_digits(std::vector<Digit>& out, std::uint32_t base, const Integer& value,
                  std::size_t width) {
    if (width == 0) return;
    if (value == 0) {
        out.insert(out.end(), width, 0);
        return;
    }
    if (base <= 62) {
        std::string s = value.get_str(static_cast<int>(base));
        if (s.size() > width) throw std::invalid_argument("value does not fit in width");
        out.insert(out.end(), width - s.size(), 0);
        for (char c : s) {
            Digit d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (c >= 'A' && c <= 'Z') d = c - 'A' + 10;  // GMP's order above base 36
            else if (c >= 'a' && c <= 'z') d = c - 'a' + (base <= 36 ? 10 : 36);
            else throw std::logic_error("unexpected digit character");
            out.push_back(d);
        }
        return;
    }
    // Split at a power of the base near the middle.
    if (width <= 32) {
        std::vector<Digit> tmp(width, 0);
        Integer v = value;
        for (std::size_t k = width; k-- > 0;) {
            tmp[k] = static_cast<Digit>(mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), base));
        }
        if (v != 0) throw std::invalid_argument("value does not fit in width");
        out.insert(out.end(), tmp.begin(), tmp.end());
        return;
    }
    std::size_t low = width / 2;
    Integer scale = pow_int(base, low);
    Integer hi, lo;
    mpz_fdiv_qr(hi.get_mpz_t(), lo.get_mpz_t(), value.get_mpz_t(), scale.get_mpz_t());
    write_digits(out, base, hi, width - low);
    write_digits(out, base, lo, low);
}

}  // namespace

Rational parse_fraction(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
        throw std::invalid_argument("malformed fraction: " + text);
    }
    q.canonicalize();
    return q;
}

std::uint64_t ceil_log2(const Integer& n) {
    if (n < 1) throw std::invalid_argument("ceil_log2 requires n >= 1");
    Integer m = n - 1;
    return m == 0 ? 0 : mpz_sizeinbase(m.get_mpz_t(), 2);
}

DigitBlock::DigitBlock(std::uint32_t base) : base_(base) { check_base(base); }

DigitBlock::DigitBlock(std::uint32_t base, std::vector<Digit> digits)
    : base_(base), digits_(std::move(digits)) {
    check_base(base);
    for (Digit d : digits_) {
        if (d >= base_) throw std::invalid_argument("digit out of range for base");
    }
}

DigitBlock DigitBlock::from_string(std::uint32_t base, std::string_view text) {
    check_base(base);
    if (base > 36) throw std::invalid_argument("character encoding supports bases up to 36");
    std::vector<Digit> digits;
    digits.reserve(text.size());
    for (char c : text) {
        auto pos = kDigitChars.find(c);
        if (pos == std::string_view::npos || pos >= base) {
            throw std::invalid_argument(std::string("invalid digit '") + c + "' for base " +
                                        std::to_string(base));
        }
        digits.push_back(static_cast<Digit>(pos));
    }
    DigitBlock block(base);
    block.digits_ = std::move(digits);
    return block;
}

DigitBlock DigitBlock::from_integer(std::uint32_t base, const Integer& value, std::size_t width) {
    if (value < 0) throw std::invalid_argument("negative value");
    DigitBlock block(base);
    block.digits_.reserve(width);
    write_digits(block.digits_, base, value, width);
    return block;
}

void DigitBlock::push_back(Digit d) {
    if (d >= base_) throw std::invalid_argument("digit out of range for base");
    digits_.push_back(d);
}

void DigitBlock::append(const DigitBlock& other) {
    if (other.base_ != base_) throw std::invalid_argument("base mismatch");
    digits_.insert(digits_.end(), other.digits_.begin(), other.digits_.end());
}

DigitBlock DigitBlock::prefix(std::size_t n) const { return slice(0, n); }

DigitBlock DigitBlock::slice(std::size_t from, std::size_t to) const {
    if (from > to || to > size()) throw std::out_of_range("slice out of range");
    DigitBlock block(base_);
    block.digits_.assign(digits_.begin() + static_cast<std::ptrdiff_t>(from),
                         digits_.begin() + static_cast<std::ptrdiff_t>(to));
    return block;
}

bool DigitBlock::is_prefix_of(const DigitBlock& other) const {
    return base_ == other.base_ && size() <= other.size() &&
           std::equal(digits_.begin(), digits_.end(), other.digits_.begin());
}

Integer DigitBlock::to_integer() const {
    if (digits_.empty()) return 0;
    if (base_ <= 36) {
        std::string s;
        s.reserve(size());
        for (Digit d : digits_) s.push_back(kDigitChars[d]);
        return Integer(s, static_cast<int>(base_));
    }
    // Horner by halves keeps the multiplications balanced.
    std::function<Integer(std::size_t, std::size_t)> value = [&](std::size_t a, std::size_t b) {
        if (b - a <= 16) {
            Integer r = 0;
            for (std::size_t k = a; k < b; ++k) r = r * base_ + digits_[k];
            return r;
        }
        std::size_t mid = a + (b - a) / 2;
        return Integer(value(a, mid) * pow_int(base_, b - mid) + value(mid, b));
    };
    return value(0, size());
}

std::string DigitBlock::to_string() const {
    std::string s;
    if (base_ <= 36) {
        s.reserve(size());
        for (Digit d : digits_) s.push_back(kDigitChars[d]);
        return s;
    }
    for (std::size_t k = 0; k < size(); ++k) {
        if (k) s.push_back(' ');
        s += std::to_string(digits_[k]);
    }
    return s;
}

DigitBlock concat(std::span<const DigitBlock> blocks) {
    if (blocks.empty()) throw std::invalid_argument("concat of no blocks");
    DigitBlock out(blocks.front().base());
    for (const auto& b : blocks) out.append(b);
    return out;
}

DigitCounter::DigitCounter(std::uint32_t base) : counts_(base, 0) { check_base(base); }

void DigitCounter::add(Digit d) {
    if (d >= counts_.size()) throw std::invalid_argument("digit out of range for base");
    ++counts_[d];
    ++length_;
}

void DigitCounter::add(const DigitBlock& block) {
    if (block.base() != base()) throw std::invalid_argument("base mismatch");
    for (Digit d : block.digits()) ++counts_[d];
    length_ += block.size();
}

Rational DigitCounter::simple_discrepancy() const {
    if (length_ == 0) throw std::invalid_argument("discrepancy of an empty block");
    auto [lo, hi] = std::minmax_element(counts_.begin(), counts_.end());
    // |c/n - 1/b| is convex in c, so the maximum sits at the extreme counts.
    const Integer n = static_cast<unsigned long>(length_);
    const Integer b = base();
    Integer dev_hi = Integer(static_cast<unsigned long>(*hi)) * b - n;
    Integer dev_lo = n - Integer(static_cast<unsigned long>(*lo)) * b;
    Integer dev = dev_hi > dev_lo ? dev_hi : dev_lo;
    return make_rational(abs(dev), n * b);
}

bool DigitCounter::discrepancy_at_most(std::uint64_t num, std::uint64_t den) const {
    using Wide = unsigned __int128;
    const Wide n = length_;
    const Wide b = base();
    for (std::uint64_t c : counts_) {
        Wide cb = Wide(c) * b;
        Wide dev = cb > n ? cb - n : n - cb;
        if (dev * den > Wide(num) * n * b) return false;
    }
    return true;
}

}  // namespace absnorm
