#ifndef ABSNORM_REDUCTION_HPP
#define ABSNORM_REDUCTION_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "absnorm/exact.hpp"
#include "absnorm/predicate.hpp"

namespace absnorm {

struct Pair {
    std::uint64_t x;
    std::uint64_t y;
    bool operator==(const Pair&) const = default;
};

/// n = 2^{x-1} (2y - 1). A bijection from positive integers onto pairs of them.
Pair pair_decode(std::uint64_t n);
std::uint64_t pair_encode(Pair pair);

/// Pull-based stream of positive integers driving the refinement rounds.
class ControlSequence {
public:
    virtual ~ControlSequence() = default;
    /// Next value, or nullopt when a finite sequence is exhausted.
    virtual std::optional<std::uint64_t> next() = 0;
    /// Fresh stream replaying the same values from the start.
    virtual std::unique_ptr<ControlSequence> replay() const = 0;
};

/// For n = 1, 2, ...: decode (x, y); if y = 1 or C(x, y), emit x, x+1, ..., x+y-1.
class FirstReductionStream final : public ControlSequence {
public:
    explicit FirstReductionStream(Predicate predicate);
    std::optional<std::uint64_t> next() override;
    std::unique_ptr<ControlSequence> replay() const override;

    /// The pair code processed most recently.
    const Integer& position() const { return n_; }

private:
    Predicate predicate_;
    bool literal_false_;
    std::uint64_t code_ = 0;
    std::uint64_t x_ = 0;
    Integer n_ = 0;
    std::uint64_t run_next_ = 0;
    std::uint64_t run_left_ = 0;
};

/// A fixed finite list.
class ExplicitSequence final : public ControlSequence {
public:
    explicit ExplicitSequence(std::vector<std::uint64_t> values);
    std::optional<std::uint64_t> next() override;
    std::unique_ptr<ControlSequence> replay() const override;

private:
    std::vector<std::uint64_t> values_;
    std::size_t pos_ = 0;
};

std::unique_ptr<ControlSequence> first_reduction_stream(const Predicate& predicate);

/// The first `count` values of a stream (fewer if it ends).
std::vector<std::uint64_t> take(ControlSequence& stream, std::size_t count);

}  // namespace absnorm

#endif
