#ifndef ABSNORM_DISCREPANCY_HPP
#define ABSNORM_DISCREPANCY_HPP

#include <cstdint>
#include <span>

#include "absnorm/digit_block.hpp"
#include "absnorm/exact.hpp"

namespace absnorm {

/// Number of (possibly overlapping) positions at which `pattern` occurs in `text`.
/// Throws std::invalid_argument on base mismatch or empty pattern.
std::uint64_t occ(const DigitBlock& text, const DigitBlock& pattern);

/// D(u,b) = max_d |occ(u,d)/|u| - 1/b|. Throws on empty u.
Rational simple_discrepancy(const DigitBlock& u);

/// D_ell(u,b) = max over all length-ell blocks v of |occ(u,v)/|u| - 1/b^ell|.
///
/// Only windows that occur are tallied; a missing block contributes 1/b^ell.
/// The normalisation is by |u|, not by the number of windows.
Rational block_discrepancy(const DigitBlock& u, std::uint64_t ell);

/// Exact block_discrepancy(u, ell) > threshold.
///
/// For threshold < 1/b^ell, fewer than b^ell windows means some block is missing,
/// so the answer is true without a scan. Neither comparison materialises b^ell.
/// Larger thresholds take the scan.
bool block_discrepancy_exceeds(const DigitBlock& u, std::uint64_t ell, const Rational& threshold);

/// True iff the count of length-ell windows in a length-n block is below b^ell.
bool fewer_windows_than_blocks(std::uint64_t n, std::uint32_t base, std::uint64_t ell);

/// sum_j D(u_j,b)|u_j| / sum_h |u_h|, an upper bound for D of the concatenation.
Rational concat_bound(std::span<const DigitBlock> blocks);

/// p_b(k,i): length-k base-b blocks in which a fixed digit occurs exactly i times.
Integer tail_count(std::uint32_t base, std::uint64_t k, std::uint64_t i);

struct TailBoundReport {
    Integer lower_tail;   // sum over i <= k/b - eps*k
    Integer upper_tail;   // sum over i >= k/b + eps*k
    Rational bound_lower;  // certified enclosure of b^k exp(-b eps^2 k / 6)
    Rational bound_upper;
    bool holds = false;    // both tails <= bound_lower
};

/// Checks both binomial tails against b^k e^{-b eps^2 k/6}. Requires 6/k <= eps <= 1/b.
TailBoundReport tail_bound_check(std::uint32_t base, std::uint64_t k, const Rational& eps);

}  // namespace absnorm

#endif
