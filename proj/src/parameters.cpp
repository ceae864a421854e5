#include "absnorm/parameters.hpp"

#include <stdexcept>

namespace absnorm {

namespace {

void require_index(std::uint64_t i) {
    if (i < 1) throw std::invalid_argument("parameter index must be at least 1");
}

}  // namespace

Integer inverse_delta(std::uint64_t i) {
    require_index(i);
    Integer fact;
    mpz_fac_ui(fact.get_mpz_t(), i + 1);
    return (Integer(1) << (2 * i - 2)) * fact * fact;
}

Rational delta(std::uint64_t i) { return make_rational(1, inverse_delta(i)); }

std::uint64_t bits_per_digit(std::uint64_t i) {
    require_index(i);
    return ceil_log2(Integer(static_cast<unsigned long>(i + 1)));
}

std::uint64_t delta_bits(std::uint64_t i) { return ceil_log2(inverse_delta(i)); }

std::uint64_t compute_k(std::uint64_t i, LnMethod method) {
    require_index(i);
    const unsigned long s = i + 2;
    // -ln(delta_i / (2(i+1)^2)) = ln(2 (i+1)^2 / delta_i)
    const Integer argument = 2 * Integer(static_cast<unsigned long>((i + 1) * (i + 1))) * inverse_delta(i);
    const Rational scale = 6 * s * s;
    const Integer linear = 6 * s;
    Rational width(1, Integer(1) << 20);
    for (;;) {
        const Enclosure ln = ln_enclosure(argument, width, method);
        const Integer lo = floor_of(scale * ln.lo);
        const Integer hi = floor_of(scale * ln.hi);
        if (lo == hi) {
            // The log term is irrational, so it never equals the integer 6(i+2).
            const Integer bound = lo >= linear ? lo : linear;
            return Integer(bound + 1).get_ui();
        }
        width /= Integer(1) << 16;
    }
}

Rational ParamTable::delta(std::uint64_t i) const { return absnorm::delta(i); }

std::uint64_t ParamTable::k(std::uint64_t i) const {
    require_index(i);
    if (toy_) return toy_->k;
    std::lock_guard lock(mutex_);
    auto it = k_cache_.find(i);
    if (it != k_cache_.end()) return it->second;
    const std::uint64_t value = compute_k(i);
    k_cache_.emplace(i, value);
    return value;
}

std::uint64_t ParamTable::ell(std::uint64_t i) const {
    require_index(i);
    if (toy_) return toy_->ell;
    return k(i) * bits_per_digit(i) + delta_bits(i);
}

}  // namespace absnorm
