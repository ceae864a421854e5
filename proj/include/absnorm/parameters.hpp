#ifndef ABSNORM_PARAMETERS_HPP
#define ABSNORM_PARAMETERS_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>

#include "absnorm/certified.hpp"
#include "absnorm/exact.hpp"

namespace absnorm {

/// delta_i = 1 / (2^{2i-2} ((i+1)!)^2).
Rational delta(std::uint64_t i);

/// 1/delta_i as an integer.
Integer inverse_delta(std::uint64_t i);

/// Least integer strictly greater than max(6(i+2), -ln(delta_i / (2(i+1)^2)) 6(i+2)^2),
/// decided from a certified enclosure of the logarithm.
std::uint64_t compute_k(std::uint64_t i, LnMethod method = LnMethod::AtanhSeries);

/// ceil(log2(i+1)), the number of bits per base-(i+1) digit in a refinement step.
std::uint64_t bits_per_digit(std::uint64_t i);

/// ceil(-log2 delta_i).
std::uint64_t delta_bits(std::uint64_t i);

/// Constant k and ell used for every index. Runs under an override are non-conforming.
struct ToyOverride {
    std::uint64_t k;
    std::uint64_t ell;
};

/// The schedule (delta_i, k_i, ell_i), memoized and safe for concurrent readers.
class ParamTable {
public:
    ParamTable() = default;
    explicit ParamTable(ToyOverride toy) : toy_(toy) {}

    ParamTable(const ParamTable& other) : toy_(other.toy_) {}
    ParamTable& operator=(const ParamTable&) = delete;

    bool conforming() const { return !toy_.has_value(); }
    const std::optional<ToyOverride>& toy() const { return toy_; }

    Rational delta(std::uint64_t i) const;
    std::uint64_t k(std::uint64_t i) const;
    /// k_i ceil(log2(i+1)) + ceil(-log2 delta_i).
    std::uint64_t ell(std::uint64_t i) const;
    /// Candidate bits per refinement step, k_i ceil(log2(i+1)).
    std::uint64_t step_bits(std::uint64_t i) const { return k(i) * bits_per_digit(i); }
    /// ceil(-log2 delta_i), unaffected by overrides.
    std::uint64_t delta_bits(std::uint64_t i) const { return absnorm::delta_bits(i); }

private:
    std::optional<ToyOverride> toy_;
    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, std::uint64_t> k_cache_;
};

}  // namespace absnorm

#endif
