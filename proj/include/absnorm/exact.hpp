#ifndef ABSNORM_EXACT_HPP
#define ABSNORM_EXACT_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace absnorm {

using Integer = mpz_class;
using Rational = mpq_class;

// Raised when a guarantee the construction proves is observed to fail.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline Integer pow_int(std::uint64_t base, std::uint64_t exponent) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
    return r;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// "num/den" with zero rendered as "0/1".
inline std::string to_fraction_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_fraction(const std::string& text);

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Integer floor_of(const Rational& q) { return floor_div(q.get_num(), q.get_den()); }
inline Integer ceil_of(const Rational& q) { return ceil_div(q.get_num(), q.get_den()); }

// Least e with 2^e >= n, for n >= 1.
std::uint64_t ceil_log2(const Integer& n);

}  // namespace absnorm

#endif
