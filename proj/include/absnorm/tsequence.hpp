#ifndef ABSNORM_TSEQUENCE_HPP
#define ABSNORM_TSEQUENCE_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "absnorm/digit_block.hpp"
#include "absnorm/intervals.hpp"

namespace absnorm {

/// Nested intervals (I_2, ..., I_t) with I_b b-adic, I_{b+1} inside I_b and
/// mu(I_{b+1}) >= mu(I_b) / (2(b+1)). Pins base-b prefixes for every b <= t.
class TSequence {
public:
    /// Takes the intervals as given; call validate() to check the invariants.
    explicit TSequence(std::vector<BadicInterval> intervals);

    /// ([0,1)), the starting object of the construction.
    static TSequence unit() { return TSequence({BadicInterval::unit(2)}); }

    std::uint32_t t() const { return static_cast<std::uint32_t>(intervals_.size()) + 1; }
    const BadicInterval& interval(std::uint32_t base) const;
    const BadicInterval& last() const { return intervals_.back(); }
    const std::vector<BadicInterval>& intervals() const { return intervals_; }

    /// Block whose b-adic interval is I_b. Memoized; copies share the cache.
    const DigitBlock& x(std::uint32_t base) const;

    bool operator==(const TSequence& other) const { return intervals_ == other.intervals_; }

private:
    struct BlockCache;

    std::vector<BadicInterval> intervals_;
    std::shared_ptr<BlockCache> cache_;
};

/// Builds the t-sequence starting at a dyadic I2 by repeated leftmost subinterval selection.
TSequence extend_to_tsequence(const BadicInterval& I2, std::uint32_t t);

inline const DigitBlock& x_b(const TSequence& seq, std::uint32_t base) { return seq.x(base); }

/// Human-readable violations of the t-sequence invariants; empty iff valid.
std::vector<std::string> validate(const TSequence& seq);

}  // namespace absnorm

#endif
