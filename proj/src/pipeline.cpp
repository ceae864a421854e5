#include "absnorm/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

#include "absnorm/intervals.hpp"

namespace absnorm {

PipelineState PipelineState::start(const std::vector<std::uint32_t>& bases) {
    PipelineState s;
    for (auto b : bases) {
        if (b < 2) throw std::invalid_argument("base must be at least 2");
        s.emitted.emplace(b, DigitBlock(b));
    }
    return s;
}

AdvanceOutcome lambda_ref_advance(const PipelineState& state, std::uint64_t f_next,
                                  const ParamTable& params) {
    if (f_next < 1) throw std::invalid_argument("control values must be positive");
    AdvanceOutcome out{state, refine(state.current, f_next, params)};
    out.state.current = out.result.output;
    out.state.round = state.round + 1;
    const BadicInterval& I2 = out.state.current.interval(2);
    for (auto& [base, emitted] : out.state.emitted) {
        DigitBlock now = determined_digits(I2, base);
        if (!emitted.is_prefix_of(now)) throw InternalError("emitted digits contradicted");
        emitted = std::move(now);
    }
    return out;
}

DigitsResult digits(ControlSequence& control, std::uint32_t base, std::size_t count,
                    const ParamTable& params, const DigitsOptions& options) {
    if (base < 2) throw std::invalid_argument("base must be at least 2");
    if (count < 1) throw std::invalid_argument("digit count must be positive");
    PipelineState state = PipelineState::start({base});
    DigitsResult result{DigitBlock(base)};
    while (state.emitted.at(base).size() < count) {
        if (options.max_rounds != 0 && state.round >= options.max_rounds) {
            result.truncated = true;
            break;
        }
        auto f = control.next();
        if (!f) {
            result.truncated = true;
            break;
        }
        AdvanceOutcome out = lambda_ref_advance(state, *f, params);
        if (options.on_round) options.on_round(state, out);
        state = std::move(out.state);
    }
    const DigitBlock& emitted = state.emitted.at(base);
    result.digits = emitted.prefix(std::min(count, emitted.size()));
    result.rounds = state.round;
    return result;
}

DigitsResult digits(const Predicate& predicate, std::uint32_t base, std::size_t count,
                    const ParamTable& params, const DigitsOptions& options) {
    FirstReductionStream stream(predicate);
    return digits(stream, base, count, params, options);
}

}  // namespace absnorm
