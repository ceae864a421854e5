#ifndef ABSNORM_PIPELINE_HPP
#define ABSNORM_PIPELINE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "absnorm/digit_block.hpp"
#include "absnorm/parameters.hpp"
#include "absnorm/reduction.hpp"
#include "absnorm/refine.hpp"
#include "absnorm/tsequence.hpp"

namespace absnorm {

/// R_j together with the digits emitted so far for each subscribed base.
struct PipelineState {
    TSequence current = TSequence::unit();
    std::uint64_t round = 0;
    std::map<std::uint32_t, DigitBlock> emitted;

    static PipelineState start(const std::vector<std::uint32_t>& bases);
};

struct AdvanceOutcome {
    PipelineState state;
    RefineResult result;
};

/// R_{j+1} = Ref_{f_next}(R_j). Newly determined digits of the new I_2 are
/// appended for every subscribed base; emitted digits are never revised.
AdvanceOutcome lambda_ref_advance(const PipelineState& state, std::uint64_t f_next,
                                  const ParamTable& params);

struct DigitsOptions {
    /// Stop with a truncation notice after this many rounds (0 = unlimited).
    std::uint64_t max_rounds = 0;
    /// Called after every round with the state before the round and the outcome.
    std::function<void(const PipelineState& before, const AdvanceOutcome&)> on_round;
};

struct DigitsResult {
    DigitBlock digits;
    bool truncated = false;
    std::uint64_t rounds = 0;
};

/// The first `count` base-b digits of the limit real, running rounds until they are determined.
DigitsResult digits(ControlSequence& control, std::uint32_t base, std::size_t count,
                    const ParamTable& params, const DigitsOptions& options = {});

DigitsResult digits(const Predicate& predicate, std::uint32_t base, std::size_t count,
                    const ParamTable& params, const DigitsOptions& options = {});

}  // namespace absnorm

#endif
