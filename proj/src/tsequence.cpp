#include "absnorm/tsequence.hpp"

#include <optional>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace absnorm {

struct TSequence::BlockCache {
    std::mutex mutex;
    std::vector<std::optional<DigitBlock>> blocks;
};

TSequence::TSequence(std::vector<BadicInterval> intervals)
    : intervals_(std::move(intervals)), cache_(std::make_shared<BlockCache>()) {
    if (intervals_.empty()) throw std::invalid_argument("a t-sequence needs at least I_2");
    cache_->blocks.resize(intervals_.size());
}

const BadicInterval& TSequence::interval(std::uint32_t base) const {
    if (base < 2 || base > t()) {
        throw std::invalid_argument("base " + std::to_string(base) + " outside 2.." +
                                    std::to_string(t()));
    }
    return intervals_[base - 2];
}

const DigitBlock& TSequence::x(std::uint32_t base) const {
    const BadicInterval& I = interval(base);
    std::lock_guard lock(cache_->mutex);
    auto& slot = cache_->blocks[base - 2];
    if (!slot) slot = block_of(I);
    return *slot;
}

TSequence extend_to_tsequence(const BadicInterval& I2, std::uint32_t t) {
    if (t < 2) throw std::invalid_argument("t must be at least 2");
    if (I2.base() != 2) throw std::invalid_argument("a t-sequence starts with a dyadic interval");
    std::vector<BadicInterval> intervals{I2};
    intervals.reserve(t - 1);
    for (std::uint32_t b = 3; b <= t; ++b) {
        intervals.push_back(leftmost_badic_subinterval(intervals.back(), b));
    }
    return TSequence(std::move(intervals));
}

namespace {

Integer factorial_ratio(std::uint32_t hi, std::uint32_t lo) {
    Integer r = 1;
    for (std::uint32_t k = lo + 1; k <= hi; ++k) r *= k;
    return r;
}

}  // namespace

std::vector<std::string> validate(const TSequence& seq) {
    std::vector<std::string> out;
    const auto& I = seq.intervals();
    for (std::size_t k = 0; k < I.size(); ++k) {
        const std::uint32_t b = static_cast<std::uint32_t>(k) + 2;
        if (I[k].base() != b) {
            std::ostringstream os;
            os << "I_" << b << " is " << I[k].base() << "-adic, expected " << b << "-adic";
            out.push_back(os.str());
        }
    }
    if (!out.empty()) return out;
    for (std::uint32_t b = 2; b < seq.t(); ++b) {
        const auto& outer = seq.interval(b);
        const auto& inner = seq.interval(b + 1);
        if (!contains(outer, inner)) {
            out.push_back("nesting: I_" + std::to_string(b + 1) + " is not inside I_" +
                          std::to_string(b));
        }
        // mu(I_{b+1}) * 2(b+1) >= mu(I_b)  <=>  2(b+1) b^{d_b} >= (b+1)^{d_{b+1}}
        if (Integer(2 * (b + 1)) * pow_int(b, outer.depth()) < pow_int(b + 1, inner.depth())) {
            out.push_back("ratio: mu(I_" + std::to_string(b + 1) + ") < mu(I_" + std::to_string(b) +
                          ")/" + std::to_string(2 * (b + 1)));
        }
    }
    // Non-adjacent pairs b > b' + 1: mu(I_b) >= mu(I_b') / (2^{b-b'} b!/b'!).
    for (std::uint32_t hi = 4; hi <= seq.t(); ++hi) {
        for (std::uint32_t lo = 2; lo + 2 <= hi; ++lo) {
            const Integer factor = (Integer(1) << (hi - lo)) * factorial_ratio(hi, lo);
            if (factor * pow_int(lo, seq.interval(lo).depth()) <
                pow_int(hi, seq.interval(hi).depth())) {
                out.push_back("factorial ratio: mu(I_" + std::to_string(hi) + ") too small against I_" +
                              std::to_string(lo));
            }
        }
    }
    return out;
}

}  // namespace absnorm
