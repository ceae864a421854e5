#ifndef ABSNORM_TESTS_HELPERS_HPP
#define ABSNORM_TESTS_HELPERS_HPP

#include <string>
#include <vector>

#include "absnorm/digit_block.hpp"
#include "absnorm/intervals.hpp"
#include "absnorm/tsequence.hpp"
#include "oracle.hpp"

namespace testing {

using absnorm::BadicInterval;
using absnorm::DigitBlock;
using absnorm::Rational;
using absnorm::RatInterval;

inline DigitBlock blk(std::uint32_t base, const std::string& s) { return DigitBlock::from_string(base, s); }

inline Rational q(const std::string& s) { return absnorm::parse_fraction(s); }

inline RatInterval ri(const std::string& l, const std::string& r) { return RatInterval(q(l), q(r)); }

inline oracle::Digits digits(const DigitBlock& b) {
    return oracle::Digits(b.digits().begin(), b.digits().end());
}

inline DigitBlock block(std::uint32_t base, const oracle::Digits& d) {
    return DigitBlock(base, std::vector<absnorm::Digit>(d.begin(), d.end()));
}

inline oracle::Cell cell(const BadicInterval& I) { return oracle::Cell{I.base(), I.depth(), I.index()}; }

inline BadicInterval badic(const oracle::Cell& c) { return BadicInterval(c.base, c.depth, c.index); }

inline std::vector<oracle::Cell> cells(const absnorm::TSequence& s) {
    std::vector<oracle::Cell> out;
    for (const auto& I : s.intervals()) out.push_back(cell(I));
    return out;
}

}  // namespace testing

#endif
