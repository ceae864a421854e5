#include "absnorm/discrepancy.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "absnorm/certified.hpp"

namespace absnorm {

namespace {

void require_nonempty(const DigitBlock& u) {
    if (u.empty()) throw std::invalid_argument("discrepancy of an empty block");
}

// b^ell when it fits comfortably in 64 bits.
std::optional<std::uint64_t> small_power(std::uint32_t base, std::uint64_t ell) {
    std::uint64_t p = 1;
    for (std::uint64_t k = 0; k < ell; ++k) {
        if (p > (std::numeric_limits<std::uint64_t>::max() >> 2) / base) return std::nullopt;
        p *= base;
    }
    return p;
}

struct WindowTally {
    std::uint64_t distinct = 0;
    std::uint64_t max_count = 0;
    std::uint64_t min_count = 0;
    std::uint64_t total = 0;
};

template <typename Map>
WindowTally summarize(const Map& table) {
    WindowTally t;
    t.distinct = table.size();
    bool first = true;
    for (const auto& [key, c] : table) {
        t.total += c;
        if (first || c > t.max_count) t.max_count = c;
        if (first || c < t.min_count) t.min_count = c;
        first = false;
    }
    return t;
}

WindowTally tally_windows(const DigitBlock& u, std::uint64_t ell) {
    const auto digits = u.digits();
    if (u.size() < ell) return {};
    const std::uint32_t b = u.base();
    if (auto bl = small_power(b, ell)) {
        // Rolling numeric key: value of the window modulo b^ell.
        std::unordered_map<std::uint64_t, std::uint64_t> table;
        std::uint64_t key = 0;
        for (std::size_t k = 0; k < digits.size(); ++k) {
            key = (key * b + digits[k]) % *bl;
            if (k + 1 >= ell) ++table[key];
        }
        return summarize(table);
    }
    std::unordered_map<std::u32string, std::uint64_t> table;
    for (std::size_t k = 0; k + ell <= digits.size(); ++k) {
        std::u32string key(digits.begin() + static_cast<std::ptrdiff_t>(k),
                           digits.begin() + static_cast<std::ptrdiff_t>(k + ell));
        ++table[key];
    }
    return summarize(table);
}

Rational deviation(std::uint64_t count, std::uint64_t n, const Integer& blocks) {
    Integer c = static_cast<unsigned long>(count);
    Integer nn = static_cast<unsigned long>(n);
    return make_rational(abs(c * blocks - nn), nn * blocks);
}

}  // namespace

std::uint64_t occ(const DigitBlock& text, const DigitBlock& pattern) {
    if (text.base() != pattern.base()) throw std::invalid_argument("occ: base mismatch");
    if (pattern.empty()) throw std::invalid_argument("occ: empty pattern");
    if (pattern.size() > text.size()) return 0;
    const auto t = text.digits();
    const auto p = pattern.digits();
    std::uint64_t count = 0;
    for (auto it = t.begin();; ++it) {
        it = std::search(it, t.end(), p.begin(), p.end());
        if (it == t.end()) break;
        ++count;
    }
    return count;
}

Rational simple_discrepancy(const DigitBlock& u) {
    require_nonempty(u);
    DigitCounter counter(u.base());
    counter.add(u);
    return counter.simple_discrepancy();
}

Rational block_discrepancy(const DigitBlock& u, std::uint64_t ell) {
    require_nonempty(u);
    if (ell == 0) throw std::invalid_argument("block length must be positive");
    const Integer blocks = pow_int(u.base(), ell);
    const WindowTally t = tally_windows(u, ell);
    Rational best = 0;
    if (Integer(static_cast<unsigned long>(t.distinct)) < blocks) best = Rational(1) / blocks;
    if (t.distinct > 0) {
        best = std::max(best, deviation(t.max_count, u.size(), blocks));
        best = std::max(best, deviation(t.min_count, u.size(), blocks));
    }
    return best;
}

bool fewer_windows_than_blocks(std::uint64_t n, std::uint32_t base, std::uint64_t ell) {
    if (base < 2) throw std::invalid_argument("base must be at least 2");
    const std::uint64_t windows = n >= ell ? n - ell + 1 : 0;
    unsigned __int128 power = 1;
    for (std::uint64_t k = 0; k < ell; ++k) {
        power *= base;
        if (power > windows) return true;
    }
    return windows < power;
}

namespace {

// threshold < 1/b^ell, by growing b^k against 1/threshold with early exit.
bool threshold_below_missing_term(const Rational& threshold, std::uint32_t base, std::uint64_t ell) {
    if (threshold <= 0) return true;
    const Integer& num = threshold.get_num();
    const Integer& den = threshold.get_den();
    Integer scaled = num;
    for (std::uint64_t k = 0; k < ell; ++k) {
        scaled *= base;
        if (scaled >= den) return false;
    }
    return true;
}

}  // namespace

bool block_discrepancy_exceeds(const DigitBlock& u, std::uint64_t ell, const Rational& threshold) {
    require_nonempty(u);
    if (ell == 0) throw std::invalid_argument("block length must be positive");
    if (threshold_below_missing_term(threshold, u.base(), ell) &&
        fewer_windows_than_blocks(u.size(), u.base(), ell)) {
        return true;
    }
    return block_discrepancy(u, ell) > threshold;
}

Rational concat_bound(std::span<const DigitBlock> blocks) {
    if (blocks.empty()) throw std::invalid_argument("concat_bound of no blocks");
    const std::uint32_t base = blocks.front().base();
    Rational weighted = 0;
    std::uint64_t total = 0;
    for (const auto& u : blocks) {
        if (u.base() != base) throw std::invalid_argument("concat_bound: base mismatch");
        if (u.empty()) continue;
        weighted += simple_discrepancy(u) * static_cast<unsigned long>(u.size());
        total += u.size();
    }
    if (total == 0) throw std::invalid_argument("concat_bound: all blocks empty");
    return weighted / static_cast<unsigned long>(total);
}

Integer tail_count(std::uint32_t base, std::uint64_t k, std::uint64_t i) {
    if (base < 2) throw std::invalid_argument("base must be at least 2");
    if (i > k) throw std::invalid_argument("tail_count requires 0 <= i <= k");
    Integer binom;
    mpz_bin_uiui(binom.get_mpz_t(), k, i);
    return binom * pow_int(base - 1, k - i);
}

TailBoundReport tail_bound_check(std::uint32_t base, std::uint64_t k, const Rational& eps) {
    if (base < 2 || k == 0) throw std::invalid_argument("tail_bound_check: bad base or length");
    const Rational kk = static_cast<unsigned long>(k);
    if (eps < Rational(6) / kk || eps > Rational(1, base)) {
        throw std::invalid_argument("tail_bound_check requires 6/k <= eps <= 1/b");
    }
    TailBoundReport report;
    const Rational mean = kk / base;
    const Rational low_end = mean - eps * kk;
    const Rational high_start = mean + eps * kk;
    for (std::uint64_t i = 0; i <= k; ++i) {
        const Rational ii = static_cast<unsigned long>(i);
        if (ii <= low_end) report.lower_tail += tail_count(base, k, i);
        if (ii >= high_start) report.upper_tail += tail_count(base, k, i);
    }
    const Integer total = pow_int(base, k);
    const Rational exponent = -(Rational(base) * eps * eps * kk / 6);
    const Enclosure e = exp_enclosure(exponent, Rational(1, total * (Integer(1) << 32)));
    report.bound_lower = e.lo * total;
    report.bound_upper = e.hi * total;
    report.holds = Rational(report.lower_tail) <= report.bound_lower &&
                   Rational(report.upper_tail) <= report.bound_lower;
    return report;
}

}  // namespace absnorm
