#ifndef ABSNORM_DIGIT_BLOCK_HPP
#define ABSNORM_DIGIT_BLOCK_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absnorm/exact.hpp"

namespace absnorm {

using Digit = std::uint32_t;

/// A finite string of digits in a fixed base (base >= 2). The empty block is valid.
class DigitBlock {
public:
    explicit DigitBlock(std::uint32_t base);
    DigitBlock(std::uint32_t base, std::vector<Digit> digits);

    /// Parses characters '0'-'9' then 'a'-'z' (bases up to 36).
    static DigitBlock from_string(std::uint32_t base, std::string_view text);

    /// The width-digit base-b representation of value, left-padded with zeros.
    static DigitBlock from_integer(std::uint32_t base, const Integer& value, std::size_t width);

    std::uint32_t base() const { return base_; }
    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    Digit operator[](std::size_t i) const { return digits_[i]; }
    std::span<const Digit> digits() const { return digits_; }

    void push_back(Digit d);
    void append(const DigitBlock& other);

    DigitBlock prefix(std::size_t n) const;
    DigitBlock slice(std::size_t from, std::size_t to) const;
    bool is_prefix_of(const DigitBlock& other) const;

    /// Value of the digits read as a base-b numeral.
    Integer to_integer() const;

    /// Characters for bases <= 36; otherwise space-separated decimal values.
    std::string to_string() const;

    bool operator==(const DigitBlock&) const = default;

private:
    std::uint32_t base_;
    std::vector<Digit> digits_;
};

DigitBlock concat(std::span<const DigitBlock> blocks);

/// Running per-digit tally.
class DigitCounter {
public:
    explicit DigitCounter(std::uint32_t base);

    void add(Digit d);
    void add(const DigitBlock& block);

    std::uint32_t base() const { return static_cast<std::uint32_t>(counts_.size()); }
    std::uint64_t length() const { return length_; }
    std::uint64_t count(Digit d) const { return counts_[d]; }
    std::span<const std::uint64_t> counts() const { return counts_; }

    /// max_d |count(d)/length - 1/base|; requires length >= 1.
    Rational simple_discrepancy() const;

    /// Exact test of simple_discrepancy() <= num/den by integer cross-multiplication.
    bool discrepancy_at_most(std::uint64_t num, std::uint64_t den) const;

private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t length_ = 0;
};

}  // namespace absnorm

#endif
