#include "absnorm/refine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "absnorm/discrepancy.hpp"
#include "absnorm/intervals.hpp"

namespace absnorm {

namespace {

using Wide = __int128;

std::string base_tag(std::uint32_t b) { return "base " + std::to_string(b); }

// Per-base geometry of one recursive step. All candidates share depths.
struct BaseFrame {
    std::uint32_t base = 2;
    std::uint64_t depth = 0;   // d_b, depth of J_b
    std::uint64_t ext = 0;     // |u_b| = d_b - depth(I_{j,b})
    Integer scale;             // b^{d_b}
    Integer offset;            // index of I_{j,b}'s left end at depth d_b
    Integer origin;            // A_L b^{d_b} - offset 2^{M_L}
    std::uint64_t min_count = 0;
    std::uint64_t max_count = 0;
    std::uint64_t outer_depth = 0;        // depth of I_{j,b}
    std::vector<std::uint64_t> known;     // digit counts of the determined prefix of u_b
    std::vector<Digit> prefix;            // that prefix
    std::uint64_t common = 0;             // length of that prefix
};

// Bases a and b = a^m: the digits of J_b at absolute positions p with m*p <= d_a
// are the m-digit groups of J_a.
struct PowerPair {
    std::size_t low = 0;   // frame of a
    std::size_t high = 0;  // frame of b
    std::uint32_t m = 0;
    std::vector<std::vector<std::uint64_t>> weight;  // weight[d][c]: occurrences of digit d in group c
    std::vector<std::vector<std::size_t>> order;     // group values by ascending weight[d]
    std::uint64_t tail_width = 0;  // a^(m e - r0): trailing b-cells per a-cell of J_a
    std::uint64_t tail_span = 0;   // bound on how many of them J_b's left end can pass
};

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// Allowed per-digit counts c in a length-n block with |c/n - 1/b| <= 1/(i+2).
void count_window(std::uint64_t n, std::uint32_t b, std::uint64_t i, std::uint64_t& lo,
                  std::uint64_t& hi) {
    const Wide s = static_cast<Wide>(i) + 2;
    const Wide den = static_cast<Wide>(b) * s;
    const Wide low_num = static_cast<Wide>(n) * (s - b);
    const Wide high_num = static_cast<Wide>(n) * (s + b);
    lo = low_num <= 0 ? 0 : static_cast<std::uint64_t>((low_num + den - 1) / den);
    hi = static_cast<std::uint64_t>(high_num / den);
}

class CandidateSearch {
public:
    CandidateSearch(const TSequence& prev, std::uint64_t i, const ParamTable& params)
        : i_(i), t_(static_cast<std::uint32_t>(i + 1)), bits_(params.step_bits(i)) {
        if (prev.t() != t_) {
            throw std::invalid_argument("recursive_step expects an (i+1)-sequence");
        }
        const BadicInterval L = leftmost_quarter_dyadic(prev.last());
        lead_depth_ = L.depth();
        lead_index_ = L.index();
        frames_.resize(t_ - 1);
        std::uint64_t depth = lead_depth_ + bits_;
        for (std::uint32_t b = 2; b <= t_; ++b) {
            BaseFrame& f = frames_[b - 2];
            f.base = b;
            if (b > 2) depth = badic_subinterval_depth(b - 1, depth, b);
            f.depth = depth;
            const BadicInterval& outer = prev.interval(b);
            if (depth <= outer.depth()) throw InternalError("candidate not deeper than I_j");
            f.ext = depth - outer.depth();
            f.outer_depth = outer.depth();
            f.scale = pow_int(b, depth);
            f.offset = outer.index() * pow_int(b, f.ext);
            f.origin = lead_index_ * f.scale - (f.offset << lead_depth_);
            count_window(f.ext, b, i_, f.min_count, f.max_count);
        }
        for (std::uint32_t a = 2; a <= t_; ++a) {
            std::uint64_t power = a;
            for (std::uint32_t m = 2;; ++m) {
                power *= a;
                if (power > t_) break;
                PowerPair pp;
                pp.low = a - 2;
                pp.high = power - 2;
                pp.m = m;
                pp.weight.assign(a, std::vector<std::uint64_t>(power, 0));
                for (std::uint64_t c = 0; c < power; ++c) {
                    std::uint64_t v = c;
                    for (std::uint32_t k = 0; k < m; ++k, v /= a) ++pp.weight[v % a][c];
                }
                pp.order.resize(a);
                for (std::uint32_t d = 0; d < a; ++d) {
                    auto& ord = pp.order[d];
                    for (std::size_t c = 0; c < power; ++c) ord.push_back(c);
                    std::stable_sort(ord.begin(), ord.end(), [&](std::size_t x, std::size_t y) {
                        return pp.weight[d][x] < pp.weight[d][y];
                    });
                }
                if (tail_bounds(pp)) pairs_.push_back(std::move(pp));
            }
        }
    }

    struct Selection {
        Integer rank;
        std::vector<BadicInterval> intervals;
        std::vector<DigitBlock> u;
        std::uint64_t nodes = 0;
    };

    Selection run() {
        Selection sel;
        std::vector<std::uint8_t> path;
        Integer prefix = 0;
        std::uint64_t nodes = 0;
        for (;;) {
            ++nodes;
            const std::uint64_t q = path.size();
            bool advance = feasible(q, prefix);
            if (advance && q == bits_) {
                if (accept_leaf(prefix, sel)) {
                    sel.rank = prefix;
                    sel.nodes = nodes;
                    return sel;
                }
                advance = false;
            }
            if (advance) {
                path.push_back(0);
                prefix <<= 1;
                continue;
            }
            while (!path.empty() && path.back() == 1) {
                path.pop_back();
                prefix >>= 1;
            }
            if (path.empty()) {
                throw InternalError("no suitable candidate among the 2^" + std::to_string(bits_) +
                                    " parts");
            }
            path.back() = 1;
            prefix += 1;
        }
    }

private:
    // Can some completion of the first q candidate bits satisfy every base's count bounds?
    bool feasible(std::uint64_t q, const Integer& prefix) {
        const std::uint64_t shift = lead_depth_ + q;
        for (BaseFrame& f : frames_) {
            // J_b lies inside the dyadic cell P of the prefix; bound its relative index.
            Integer lifted = (f.origin << q) + prefix * f.scale;
            Integer lo, hi;
            mpz_cdiv_q_2exp(lo.get_mpz_t(), lifted.get_mpz_t(), shift);
            lifted += f.scale;
            mpz_fdiv_q_2exp(hi.get_mpz_t(), lifted.get_mpz_t(), shift);
            hi -= 1;
            if (!counts_feasible(f, lo, hi)) return false;
        }
        for (const PowerPair& pp : pairs_) {
            if (!pair_feasible(pp)) return false;
        }
        return true;
    }

    // Along the chain J_a, J_{a+1}, ..., J_b each left end lies less than one cell of
    // the next base above the previous one.
    bool tail_bounds(PowerPair& pp) const {
        const BaseFrame& fa = frames_[pp.low];
        const BaseFrame& fb = frames_[pp.high];
        const std::uint64_t last_paired = fa.depth / pp.m;
        const std::uint64_t e = fb.depth - last_paired;
        const std::uint64_t shift = pp.m * e - fa.depth % pp.m;
        if (fb.depth <= last_paired || fb.base > 64) return false;
        if (static_cast<double>(shift) * std::log2(static_cast<double>(fa.base)) > 40) return false;
        pp.tail_width = ipow(fa.base, shift);
        Rational span = 0;
        for (std::size_t k = pp.low + 1; k <= pp.high; ++k) span += Rational(fb.scale, frames_[k].scale);
        const Integer bound = ceil_of(span);
        if (bound > Integer(static_cast<unsigned long>(pp.tail_width))) {
            pp.tail_span = pp.tail_width;
        } else {
            pp.tail_span = bound.get_ui();
        }
        return true;
    }

    bool counts_feasible(BaseFrame& f, const Integer& lo, const Integer& hi) {
        lo_digits_ = DigitBlock::from_integer(f.base, lo, f.ext);
        hi_digits_ = DigitBlock::from_integer(f.base, hi, f.ext);
        const auto a = lo_digits_.digits();
        const auto b = hi_digits_.digits();
        f.known.assign(f.base, 0);
        std::size_t common = 0;
        while (common < a.size() && a[common] == b[common]) {
            ++f.known[a[common]];
            ++common;
        }
        f.common = common;
        f.prefix.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(common));
        const std::uint64_t free = f.ext - common;
        std::uint64_t need = 0;
        std::uint64_t room = 0;
        for (std::uint64_t c : f.known) {
            const std::uint64_t low = std::max(c, f.min_count);
            const std::uint64_t high = std::min(f.max_count, c + free);
            if (low > high) return false;
            need += low;
            room += high;
        }
        return need <= f.ext && f.ext <= room;
    }

    // Joint count bounds for a base a and its power b = a^m. A digit of J_b whose
    // group of a-digits lies in the undetermined part of J_a is tallied by group value.
    // Digits straddling the determined boundary and the trailing digits of J_b (fixed by
    // the leftmost-cell rule to a short range above J_a's left end) are enumerated.
    // Everything else is slack, so this never rejects a feasible node.
    bool pair_feasible(const PowerPair& pp) const {
        const BaseFrame& fa = frames_[pp.low];
        const BaseFrame& fb = frames_[pp.high];
        const std::uint64_t m = pp.m, A = fa.base, B = fb.base;
        const std::uint64_t free_start = fa.outer_depth + fa.common;
        const std::uint64_t first_b = fb.outer_depth + fb.common + 1;
        const std::uint64_t last_paired = fa.depth / m;
        const std::uint64_t r0 = fa.depth % m;
        const std::uint64_t e = fb.depth - last_paired;
        if (last_paired <= fb.outer_depth) return true;
        const auto a_digit = [&](std::uint64_t pos) { return fa.prefix[pos - fa.outer_depth - 1]; };
        const auto b_digit = [&](std::uint64_t pos) { return fb.prefix[pos - fb.outer_depth - 1]; };

        std::vector<std::int64_t> extra_a(A, 0), extra_b(B, 0);
        std::uint64_t slack_a = 0;
        const std::uint64_t before = m * fb.outer_depth;
        if (free_start < before) slack_a += before - free_start;
        // Known b-digits fix the undetermined a-digits of their groups.
        for (std::uint64_t p = std::max(fb.outer_depth + 1, free_start / m + 1);
             p < first_b && p <= last_paired; ++p) {
            std::uint64_t v = b_digit(p);
            for (std::uint64_t k = 0; k < m; ++k, v /= A) {
                if (m * p - k > free_start) ++extra_a[v % A];
            }
        }
        // Groups inside the determined a-prefix fix b-digits.
        for (std::uint64_t p = first_b; p <= last_paired && m * p <= free_start; ++p) {
            std::uint64_t v = 0;
            for (std::uint64_t k = 1; k <= m; ++k) v = v * A + a_digit(m * (p - 1) + k);
            ++extra_b[v];
        }
        const std::uint64_t group_from = std::max(first_b, (free_start + m - 1) / m + 1);
        const std::uint64_t groups = last_paired >= group_from ? last_paired - group_from + 1 : 0;

        // (a-digit contributions, b-digit contributions) of each edge option.
        using Edge = std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>;
        std::vector<Edge> straddle{{std::vector<std::int64_t>(A, 0), std::vector<std::int64_t>(B, 0)}};
        const std::uint64_t ps = free_start / m + 1;
        if (free_start % m != 0 && ps >= first_b && ps <= last_paired) {
            straddle.clear();
            const std::uint64_t low_digits = m * ps - free_start;
            std::uint64_t high = 0;
            for (std::uint64_t k = m * (ps - 1) + 1; k <= free_start; ++k) high = high * A + a_digit(k);
            const std::uint64_t options = ipow(A, low_digits);
            for (std::uint64_t low = 0; low < options; ++low) {
                Edge edge{std::vector<std::int64_t>(A, 0), std::vector<std::int64_t>(B, 0)};
                ++edge.second[high * options + low];
                std::uint64_t v = low;
                for (std::uint64_t k = 0; k < low_digits; ++k, v /= A) ++edge.first[v % A];
                straddle.push_back(std::move(edge));
            }
        }
        std::vector<Edge> tail;
        {
            const std::uint64_t tail_start = m * last_paired;  // a-positions after this are in the tail
            const std::uint64_t width = pp.tail_width;
            for (std::uint64_t v = 0; v < ipow(A, r0); ++v) {
                Edge edge{std::vector<std::int64_t>(A, 0), std::vector<std::int64_t>(B, 0)};
                bool consistent = true;
                for (std::uint64_t k = 0; k < r0; ++k) {
                    const std::uint64_t pos = tail_start + k + 1;
                    const std::uint64_t d = (v / ipow(A, r0 - 1 - k)) % A;
                    if (pos <= free_start) {
                        if (a_digit(pos) != d) consistent = false;
                    } else {
                        ++edge.first[d];
                    }
                }
                if (!consistent) continue;
                const std::uint64_t t_lo = v * width;
                const std::uint64_t t_hi = std::min(t_lo + pp.tail_span, (v + 1) * width) - 1;
                for (std::uint64_t T = t_lo; T <= t_hi; ++T) {
                    Edge with = edge;
                    bool ok = true;
                    for (std::uint64_t k = 0; k < e; ++k) {
                        const std::uint64_t pos = last_paired + k + 1;
                        const std::uint64_t d = (T / ipow(B, e - 1 - k)) % B;
                        if (pos < first_b) {
                            if (b_digit(pos) != d) ok = false;
                        } else {
                            ++with.second[d];
                        }
                    }
                    if (ok) tail.push_back(std::move(with));
                }
            }
        }

        std::vector<std::int64_t> ea(A), eb(B);
        for (const Edge& s : straddle) {
            for (const Edge& t : tail) {
                for (std::uint64_t d = 0; d < A; ++d) ea[d] = extra_a[d] + s.first[d] + t.first[d];
                for (std::uint64_t c = 0; c < B; ++c) eb[c] = extra_b[c] + s.second[c] + t.second[c];
                if (groups_feasible(pp, ea, eb, groups, slack_a)) return true;
            }
        }
        return false;
    }

    bool groups_feasible(const PowerPair& pp, const std::vector<std::int64_t>& ea,
                         const std::vector<std::int64_t>& eb, std::uint64_t groups,
                         std::uint64_t slack_a) const {
        const BaseFrame& fa = frames_[pp.low];
        const BaseFrame& fb = frames_[pp.high];
        const std::size_t nb = fb.base;
        const auto g = static_cast<std::int64_t>(groups);
        std::int64_t lo[64], hi[64];
        std::int64_t sum_lo = 0, sum_hi = 0;
        for (std::size_t c = 0; c < nb; ++c) {
            const std::int64_t have = static_cast<std::int64_t>(fb.known[c]) + eb[c];
            lo[c] = std::max<std::int64_t>(0, static_cast<std::int64_t>(fb.min_count) - have);
            hi[c] = std::min<std::int64_t>(g, static_cast<std::int64_t>(fb.max_count) - have);
            if (lo[c] > hi[c]) return false;
            sum_lo += lo[c];
            sum_hi += hi[c];
        }
        if (g < sum_lo || g > sum_hi) return false;
        for (std::size_t d = 0; d < fa.base; ++d) {
            const auto& order = pp.order[d];
            const auto& w = pp.weight[d];
            std::int64_t base_weight = 0;
            for (std::size_t c = 0; c < nb; ++c) base_weight += static_cast<std::int64_t>(w[c]) * lo[c];
            const auto fill = [&](bool ascending) {
                std::int64_t rest = g - sum_lo, total = base_weight;
                for (std::size_t k = 0; k < nb && rest > 0; ++k) {
                    const std::size_t c = order[ascending ? k : nb - 1 - k];
                    const std::int64_t take = std::min(rest, hi[c] - lo[c]);
                    total += take * static_cast<std::int64_t>(w[c]);
                    rest -= take;
                }
                return total;
            };
            const std::int64_t have = static_cast<std::int64_t>(fa.known[d]) + ea[d];
            const std::int64_t need_lo =
                static_cast<std::int64_t>(fa.min_count) - have - static_cast<std::int64_t>(slack_a);
            const std::int64_t need_hi = static_cast<std::int64_t>(fa.max_count) - have;
            if (fill(false) < need_lo || fill(true) > need_hi) return false;
        }
        return true;
    }

    bool accept_leaf(const Integer& rank, Selection& sel) {
        std::vector<BadicInterval> intervals;
        std::vector<DigitBlock> u;
        intervals.reserve(frames_.size());
        u.reserve(frames_.size());
        Integer index = (lead_index_ << bits_) + rank;
        for (const BaseFrame& f : frames_) {
            if (f.base > 2) {
                const BaseFrame& outer = frames_[f.base - 3];
                Integer next = ceil_div(index * f.scale, outer.scale);
                if ((next + 1) * outer.scale > (index + 1) * f.scale) {
                    throw InternalError("candidate " + base_tag(f.base) + " subinterval missing");
                }
                index = std::move(next);
            }
            const Integer rel = index - f.offset;
            if (rel < 0) throw InternalError("candidate escapes I_j in " + base_tag(f.base));
            DigitBlock block = DigitBlock::from_integer(f.base, rel, f.ext);
            if (!suitable_extension(block, i_)) return false;
            intervals.emplace_back(f.base, f.depth, index);
            u.push_back(std::move(block));
        }
        sel.intervals = std::move(intervals);
        sel.u = std::move(u);
        return true;
    }

    std::uint64_t i_;
    std::uint32_t t_;
    std::uint64_t bits_;
    std::uint64_t lead_depth_ = 0;
    Integer lead_index_;
    std::vector<BaseFrame> frames_;
    DigitBlock lo_digits_{2};
    DigitBlock hi_digits_{2};
    std::vector<PowerPair> pairs_;
};

void check_step_invariants(const StepRecord& rec, std::uint64_t i, const ParamTable& params) {
    for (std::size_t k = 0; k < rec.u.size(); ++k) {
        const DigitBlock& u = rec.u[k];
        const std::string where = "step " + std::to_string(rec.step) + ", " + base_tag(u.base());
        if (!suitable_extension(u, i)) throw InternalError(where + ": unsuitable extension");
        if (u.size() <= params.k(i)) throw InternalError(where + ": |u_b| <= k_i");
        if (params.conforming() && u.size() > params.ell(i)) {
            throw InternalError(where + ": |u_b| > ell_i");
        }
        if (std::all_of(u.digits().begin(), u.digits().end(), [](Digit d) { return d == 0; })) {
            throw InternalError(where + ": all-zero extension");
        }
    }
}

bool witness_present(const DigitBlock& x, std::uint64_t block_length) {
    if (x.empty()) return true;  // vacuous; length condition fails anyway
    if (fewer_windows_than_blocks(x.size(), x.base(), block_length)) return true;
    const Rational threshold(1, pow_int(x.base(), block_length + 1));
    return block_discrepancy_exceeds(x, block_length, threshold);
}

}  // namespace

BadicInterval leftmost_quarter_dyadic(const BadicInterval& I) {
    return leftmost_badic_subinterval(I, 2);
}

TSequence initial_step(const TSequence& input, std::uint64_t i) {
    if (i < 1) throw std::invalid_argument("refinement index must be at least 1");
    return extend_to_tsequence(leftmost_quarter_dyadic(input.last()),
                               static_cast<std::uint32_t>(i + 1));
}

bool suitable_extension(const DigitBlock& u, std::uint64_t i) {
    if (u.empty()) return false;
    DigitCounter counter(u.base());
    counter.add(u);
    return counter.discrepancy_at_most(1, i + 2);
}

std::pair<TSequence, StepRecord> recursive_step(const TSequence& prev, std::uint64_t i,
                                                 const ParamTable& params,
                                                 std::uint64_t step_index) {
    CandidateSearch search(prev, i, params);
    auto sel = search.run();
    StepRecord rec;
    rec.step = step_index;
    rec.scanned = sel.rank;
    rec.nodes_visited = sel.nodes;
    for (const auto& J : sel.intervals) rec.x_length.push_back(J.depth());
    for (const auto& u : sel.u) rec.u_discrepancy.push_back(simple_discrepancy(u));
    rec.u = std::move(sel.u);
    check_step_invariants(rec, i, params);
    return {TSequence(std::move(sel.intervals)), std::move(rec)};
}

TerminationDetail termination_detail(std::span<const DigitBlock> x,
                                     std::span<const DigitCounter> counters, std::uint64_t i,
                                     const ParamTable& params) {
    TerminationDetail d{true, true, true};
    const std::uint64_t min_length = params.ell(i + 1) * (i + 3);
    const std::uint64_t block_length = 2 * params.ell(i);
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k].size() <= min_length) d.long_enough = false;
        if (counters[k].length() == 0 || !counters[k].discrepancy_at_most(2, i + 2)) {
            d.balanced = false;
        }
        if (!witness_present(x[k], block_length)) d.witness = false;
    }
    return d;
}

bool termination_met(const TSequence& current, std::uint64_t i, const ParamTable& params) {
    if (current.t() != i + 1) throw std::invalid_argument("termination_met expects an (i+1)-sequence");
    std::vector<DigitBlock> x;
    std::vector<DigitCounter> counters;
    for (std::uint32_t b = 2; b <= current.t(); ++b) {
        x.push_back(current.x(b));
        counters.emplace_back(b);
        counters.back().add(x.back());
    }
    return termination_detail(x, counters, i, params).all();
}

RefineResult refine(const TSequence& input, std::uint64_t i, const ParamTable& params) {
    RefineResult result;
    result.i = i;
    result.p = input.t() - 1;
    const std::uint32_t t = static_cast<std::uint32_t>(i + 1);
    result.initial = initial_step(input, i);

    std::vector<DigitBlock> x;
    std::vector<DigitCounter> counters;
    for (std::uint32_t b = 2; b <= t; ++b) {
        DigitBlock x0 = result.initial.x(b);
        if (b <= input.t()) {
            const DigitBlock& before = input.x(b);
            if (!before.is_prefix_of(x0)) throw InternalError("I_0 does not extend the input");
            result.v.push_back(x0.slice(before.size(), x0.size()));
        } else {
            result.v.push_back(x0);
        }
        counters.emplace_back(b);
        counters.back().add(x0);
        x.push_back(std::move(x0));
    }

    TSequence current = result.initial;
    std::uint64_t step = 0;
    while (!termination_detail(x, counters, i, params).all()) {
        auto [next, rec] = recursive_step(current, i, params, ++step);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k].append(rec.u[k]);
            counters[k].add(rec.u[k]);
            if (x[k].size() != rec.x_length[k]) throw InternalError("length accounting broken");
        }
        current = std::move(next);
        result.trace.push_back(std::move(rec));
    }
    for (std::uint32_t b = 2; b <= t; ++b) {
        if (current.x(b) != x[b - 2]) throw InternalError("concatenation identity broken");
    }
    result.output = std::move(current);
    return result;
}

RoundBlocks round_blocks(const TSequence& input, const RefineResult& result) {
    RoundBlocks r;
    r.i = result.i;
    r.p = result.p;
    for (std::uint32_t b = 2; b <= input.t(); ++b) r.input_x.push_back(input.x(b));
    r.v = result.v;
    for (const auto& step : result.trace) {
        r.u.push_back(step.u);
        r.recorded_u_discrepancy.insert(r.recorded_u_discrepancy.end(),
                                        step.u_discrepancy.begin(), step.u_discrepancy.end());
    }
    return r;
}

GuaranteeReport check_round(const RoundBlocks& round, const ParamTable& params,
                            std::uint64_t stride) {
    GuaranteeReport report;
    if (!params.conforming()) {
        report.refused = true;
        report.notices.push_back("non-conforming (toy) parameters: guarantees not checked");
        return report;
    }
    if (stride == 0) stride = 1;
    const std::uint64_t i = round.i;
    const std::uint64_t p = round.p;
    const std::uint32_t t = static_cast<std::uint32_t>(i + 1);
    auto fail = [&](const std::string& what) { report.violations.push_back(what); };

    if (round.input_x.size() != p || round.v.size() != t - 1) {
        fail("round shape does not match i and p");
        return report;
    }
    for (std::size_t s = 0; s < round.u.size(); ++s) {
        if (round.u[s].size() != t - 1) {
            fail("step " + std::to_string(s + 1) + ": wrong number of bases");
            return report;
        }
    }

    // Step invariants.
    for (std::size_t s = 0; s < round.u.size(); ++s) {
        for (std::uint32_t b = 2; b <= t; ++b) {
            const DigitBlock& u = round.u[s][b - 2];
            const std::string where = "step " + std::to_string(s + 1) + ", " + base_tag(b);
            if (u.base() != b) { fail(where + ": wrong base"); continue; }
            if (!suitable_extension(u, i)) fail(where + ": suitability D(u_b,b) > 1/(i+2)");
            if (u.size() <= params.k(i)) fail(where + ": |u_b| <= k_i");
            if (u.size() > params.ell(i)) fail(where + ": |u_b| > ell_i");
            if (std::all_of(u.digits().begin(), u.digits().end(), [](Digit d) { return d == 0; })) {
                fail(where + ": u_b is all zeros");
            }
            const std::size_t flat = s * (t - 1) + (b - 2);
            if (flat < round.recorded_u_discrepancy.size() && !u.empty() &&
                round.recorded_u_discrepancy[flat] != simple_discrepancy(u)) {
                fail(where + ": recorded discrepancy does not match u_b");
            }
        }
    }

    const std::uint32_t checked = static_cast<std::uint32_t>(std::min(i, p) + 1);
    for (std::uint32_t b = 2; b <= std::min<std::uint32_t>(t, static_cast<std::uint32_t>(p + 1)); ++b) {
        if (round.v[b - 2].size() > params.delta_bits(p)) {
            fail(base_tag(b) + ": |v_b| exceeds ceil(-log2 delta_p)");
        }
    }

    // Rebuild x_b(R) step by step and confirm the run stopped at the first step meeting (a)-(c).
    std::vector<DigitBlock> x;
    std::vector<DigitCounter> counters;
    for (std::uint32_t b = 2; b <= t; ++b) {
        DigitBlock start = b <= p + 1 ? round.input_x[b - 2] : DigitBlock(b);
        start.append(round.v[b - 2]);
        counters.emplace_back(b);
        counters.back().add(start);
        x.push_back(std::move(start));
    }
    for (std::size_t s = 0; s <= round.u.size(); ++s) {
        const bool done = termination_detail(x, counters, i, params).all();
        if (s < round.u.size() && done) {
            fail("termination conditions already held before step " + std::to_string(s + 1));
            break;
        }
        if (s == round.u.size() && !done) fail("final sequence does not meet termination conditions");
        if (s == round.u.size()) break;
        for (std::uint32_t b = 2; b <= t; ++b) {
            x[b - 2].append(round.u[s][b - 2]);
            counters[b - 2].add(round.u[s][b - 2]);
        }
    }

    // (1) R_2 inside I_{p+1}.
    if (!contains(interval_of(round.input_x[p - 1]), interval_of(x[0]))) {
        fail("(1) R_2 is not inside I_{p+1}");
    }
    const std::uint64_t min_length = params.ell(i + 1) * (i + 3);
    const std::uint64_t block_length = 2 * params.ell(i);
    for (std::uint32_t b = 2; b <= checked; ++b) {
        const DigitBlock& xr = x[b - 2];
        const std::string tag = base_tag(b);
        if (!counters[b - 2].discrepancy_at_most(2, i + 2)) fail("(2) " + tag + ": D(x_b(R)) > 2/(i+2)");
        if (!witness_present(xr, block_length)) fail("(3) " + tag + ": block discrepancy witness missing");
        if (xr.size() <= min_length) fail("(4) " + tag + ": |x_b(R)| <= ell_{i+1}(i+3)");

        const DigitBlock& xi = round.input_x[b - 2];
        if (xi.empty()) {
            report.notices.push_back("(5) " + tag + ": skipped, x_b(I) is empty");
            continue;
        }
        if (!xi.is_prefix_of(xr)) {
            fail("(5) " + tag + ": x_b(I) is not a prefix of x_b(R)");
            continue;
        }
        const Rational n = static_cast<unsigned long>(xi.size());
        const Rational bound = simple_discrepancy(xi) +
                               Rational(static_cast<unsigned long>(params.delta_bits(p) + params.ell(i))) / n +
                               Rational(1, static_cast<unsigned long>(i + 2));
        // Small ranges are checked at every length.
        const std::uint64_t every = xr.size() - xi.size() > 10000 ? stride : 1;
        DigitCounter running(b);
        running.add(xi);
        const auto digits = xr.digits();
        for (std::size_t len = xi.size();; ++len) {
            const bool sample = (len - xi.size()) % every == 0 || len == xr.size();
            if (sample && running.simple_discrepancy() > bound) {
                fail("(5) " + tag + ": prefix bound fails at length " + std::to_string(len));
                break;
            }
            if (len == xr.size()) break;
            running.add(digits[len]);
        }
    }
    return report;
}

GuaranteeReport check_refinement_guarantees(const TSequence& input, const RefineResult& result,
                                            const ParamTable& params, std::uint64_t stride) {
    GuaranteeReport report = check_round(round_blocks(input, result), params, stride);
    if (report.refused) return report;
    if (!validate(result.output).empty()) report.violations.push_back("output is not a valid t-sequence");
    if (result.output.t() != result.i + 1) report.violations.push_back("output has the wrong length");
    for (std::uint32_t b = 2; b <= result.output.t(); ++b) {
        DigitBlock rebuilt = b <= input.t() ? input.x(b) : DigitBlock(b);
        rebuilt.append(result.v_of(b));
        for (const auto& step : result.trace) rebuilt.append(step.u_of(b));
        if (rebuilt != result.output.x(b)) {
            report.violations.push_back(base_tag(b) + ": x_b(I) v_b prod u_b differs from x_b(R)");
        }
    }
    return report;
}

}  // namespace absnorm
