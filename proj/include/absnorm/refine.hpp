#ifndef ABSNORM_REFINE_HPP
#define ABSNORM_REFINE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absnorm/digit_block.hpp"
#include "absnorm/exact.hpp"
#include "absnorm/parameters.hpp"
#include "absnorm/tsequence.hpp"

namespace absnorm {

/// One recursive step of a refinement run. Per-base vectors are indexed by base - 2.
struct StepRecord {
    std::uint64_t step = 0;       // 1-based
    Integer scanned;              // candidates left of the selected one
    std::uint64_t nodes_visited = 0;
    std::vector<DigitBlock> u;    // x_b(I_j) u_b = x_b(I_{j+1})
    std::vector<Rational> u_discrepancy;
    std::vector<std::uint64_t> x_length;  // |x_b(I_{j+1})|

    const DigitBlock& u_of(std::uint32_t base) const { return u.at(base - 2); }
};

struct RefineResult {
    std::uint64_t i = 0;
    std::uint64_t p = 0;             // the input is a (p+1)-sequence
    TSequence initial = TSequence::unit();  // I_0
    TSequence output = TSequence::unit();   // I_n
    std::vector<DigitBlock> v;       // x_b(I_0) = x_b(I) v_b, b = 2..i+1 (x_b(I) empty for b > p+1)
    std::vector<StepRecord> trace;

    const DigitBlock& v_of(std::uint32_t base) const { return v.at(base - 2); }
};

/// The leftmost dyadic subinterval L of I with mu(L) >= mu(I)/4 (depth rule of
/// leftmost_badic_subinterval in base 2).
BadicInterval leftmost_quarter_dyadic(const BadicInterval& I);

/// I_0: an (i+1)-sequence starting at the leftmost quarter dyadic of the input's last interval.
TSequence initial_step(const TSequence& input, std::uint64_t i);

/// Suitability of an extension block: D(u,b) <= 1/(i+2).
bool suitable_extension(const DigitBlock& u, std::uint64_t i);

/// Selects the leftmost suitable candidate among the 2^{k_i ceil(log2(i+1))} equal
/// dyadic parts of L. The search walks candidate bits depth-first and prunes a
/// prefix only when no completion can satisfy the per-base digit-count bounds,
/// so the result is the leftmost suitable candidate.
std::pair<TSequence, StepRecord> recursive_step(const TSequence& prev, std::uint64_t i,
                                                 const ParamTable& params,
                                                 std::uint64_t step_index = 1);

/// Conditions (a) |x_b| > ell_{i+1}(i+3), (b) D(x_b,b) <= 2/(i+2),
/// (c) D_{2 ell_i}(x_b,b) > b^{-2 ell_i - 1}, for every b <= i+1.
bool termination_met(const TSequence& current, std::uint64_t i, const ParamTable& params);

struct TerminationDetail {
    bool long_enough = false;
    bool balanced = false;
    bool witness = false;
    bool all() const { return long_enough && balanced && witness; }
};

/// Termination conditions on explicit blocks and digit counters, one per base 2..i+1.
TerminationDetail termination_detail(std::span<const DigitBlock> x,
                                     std::span<const DigitCounter> counters, std::uint64_t i,
                                     const ParamTable& params);

RefineResult refine(const TSequence& input, std::uint64_t i, const ParamTable& params);

/// Block-level view of one refinement round, reconstructible from a trace.
struct RoundBlocks {
    std::uint64_t i = 0;
    std::uint64_t p = 0;
    std::vector<DigitBlock> input_x;          // x_b(I), b = 2..p+1
    std::vector<DigitBlock> v;                // b = 2..i+1
    std::vector<std::vector<DigitBlock>> u;   // [step][b - 2]
    std::vector<Rational> recorded_u_discrepancy;  // flattened [step][b-2], may be empty
};

RoundBlocks round_blocks(const TSequence& input, const RefineResult& result);

struct GuaranteeReport {
    std::vector<std::string> violations;
    std::vector<std::string> notices;
    bool refused = false;  // non-conforming parameters are never verified
    bool ok() const { return !refused && violations.empty(); }
};

/// Step invariants, length accounting, first-termination, and the five output
/// guarantees for every base b <= min(i,p)+1. The prefix bound on D(x_b(R)|ell)
/// is checked at every `stride`-th ell plus both endpoints when the range exceeds 10^4
/// lengths, otherwise at every ell. It is skipped with a
/// notice when x_b(I) is empty.
GuaranteeReport check_round(const RoundBlocks& round, const ParamTable& params,
                            std::uint64_t stride = 1);

GuaranteeReport check_refinement_guarantees(const TSequence& input, const RefineResult& result,
                                            const ParamTable& params, std::uint64_t stride = 1);

}  // namespace absnorm

#endif
