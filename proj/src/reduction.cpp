#include "absnorm/reduction.hpp"

#include <bit>
#include <limits>
#include <stdexcept>

namespace absnorm {

Pair pair_decode(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("pair codes start at 1");
    const auto v = static_cast<std::uint64_t>(std::countr_zero(n));
    const std::uint64_t odd = n >> v;
    return {v + 1, (odd + 1) / 2};
}

std::uint64_t pair_encode(Pair pair) {
    if (pair.x == 0 || pair.y == 0) throw std::invalid_argument("pairs are of positive integers");
    const std::uint64_t odd = 2 * pair.y - 1;
    if (pair.x - 1 >= 64 || odd > (std::numeric_limits<std::uint64_t>::max() >> (pair.x - 1))) {
        throw std::overflow_error("pair code exceeds 64 bits");
    }
    return odd << (pair.x - 1);
}

FirstReductionStream::FirstReductionStream(Predicate predicate)
    : predicate_(std::move(predicate)),
      literal_false_(predicate_.root().kind == BoolExpr::Kind::False) {}

std::optional<std::uint64_t> FirstReductionStream::next() {
    while (run_left_ == 0) {
        if (literal_false_) {
            // Only the codes 2^{x-1} (y = 1) append, so the rest are skipped.
            ++x_;
            n_ = Integer(1) << static_cast<mp_bitcnt_t>(x_ - 1);
            run_next_ = x_;
            run_left_ = 1;
            break;
        }
        if (code_ == std::numeric_limits<std::uint64_t>::max()) {
            throw std::overflow_error("pair code exceeds 64 bits");
        }
        n_ = static_cast<unsigned long>(++code_);
        const Pair pr = pair_decode(code_);
        if (pr.y == 1 || predicate_.evaluate(pr.x, pr.y)) {
            run_next_ = pr.x;
            run_left_ = pr.y;
        }
    }
    --run_left_;
    return run_next_++;
}

std::unique_ptr<ControlSequence> FirstReductionStream::replay() const {
    return std::make_unique<FirstReductionStream>(predicate_);
}

ExplicitSequence::ExplicitSequence(std::vector<std::uint64_t> values) : values_(std::move(values)) {
    for (auto v : values_) {
        if (v == 0) throw std::invalid_argument("control values must be positive");
    }
}

std::optional<std::uint64_t> ExplicitSequence::next() {
    if (pos_ >= values_.size()) return std::nullopt;
    return values_[pos_++];
}

std::unique_ptr<ControlSequence> ExplicitSequence::replay() const {
    return std::make_unique<ExplicitSequence>(values_);
}

std::unique_ptr<ControlSequence> first_reduction_stream(const Predicate& predicate) {
    return std::make_unique<FirstReductionStream>(predicate);
}

std::vector<std::uint64_t> take(ControlSequence& stream, std::size_t count) {
    std::vector<std::uint64_t> out;
    out.reserve(count);
    while (out.size() < count) {
        auto v = stream.next();
        if (!v) break;
        out.push_back(*v);
    }
    return out;
}

}  // namespace absnorm
