#include "absnorm/certified.hpp"

#include <stdexcept>

namespace absnorm {

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Enclosure operator*(const Rational& c, const Enclosure& a) {
    if (c < 0) throw std::invalid_argument("enclosure scaling requires c >= 0");
    return {c * a.lo, c * a.hi};
}

Enclosure exp_enclosure(const Rational& x, const Rational& max_width) {
    if (max_width <= 0) throw std::invalid_argument("max_width must be positive");
    const Rational a = abs(x);
    Rational sum = 1;
    Rational term = 1;  // x^n / n!
    for (unsigned long n = 1;; ++n) {
        term = term * x / n;
        sum += term;
        // Remainder after the term of index n.
        const Rational next = abs(term) * a / (n + 1);
        if (Rational(n + 2) <= a) continue;
        if (x >= 0) {
            // t_{n+1} (1 + x/(n+2) + ...) <= t_{n+1} / (1 - x/(n+2))
            const Rational tail = next / (1 - a / (n + 2));
            if (tail <= max_width) return {sum, sum + tail};
        } else {
            // Alternating with decreasing magnitudes from index n+1 on.
            if (2 * next <= max_width) return {sum - next, sum + next};
        }
    }
}

namespace {

// 2 atanh(z) for 0 <= z < 1 with width <= max_width.
Enclosure two_atanh(const Rational& z, const Rational& max_width) {
    if (z == 0) return {0, 0};
    const Rational z2 = z * z;
    Rational power = z;  // z^{2k+1}
    Rational sum = 0;
    for (unsigned long k = 0;; ++k) {
        sum += power / (2 * k + 1);
        power *= z2;
        const Rational tail = power / ((2 * k + 3) * (1 - z2));
        if (2 * tail <= max_width) return {2 * sum, 2 * (sum + tail)};
    }
}

Enclosure ln_atanh(const Integer& n, const Rational& max_width) {
    const std::uint64_t e = mpz_sizeinbase(n.get_mpz_t(), 2) - 1;
    const Rational m = make_rational(n, Integer(1) << e);
    const Rational part = max_width / (2 * (e + 1));
    Enclosure result = two_atanh((m - 1) / (m + 1), part);
    if (e > 0) {
        const Enclosure ln2 = two_atanh(Rational(1, 3), part);
        result = result + Rational(static_cast<unsigned long>(e)) * ln2;
    }
    return result;
}

Enclosure ln_bisection(const Integer& n, const Rational& max_width) {
    const Rational target = n;
    Rational lo = 0;
    Rational hi = static_cast<unsigned long>(mpz_sizeinbase(n.get_mpz_t(), 2));
    Rational tolerance(1, Integer(1) << 30);
    while (hi - lo > max_width) {
        const Rational mid = (lo + hi) / 2;
        const Enclosure e = exp_enclosure(mid, tolerance);
        if (e.hi < target) {
            lo = mid;
        } else if (e.lo > target) {
            hi = mid;
        } else {
            // Undecided at this precision; e^mid != n because ln n is irrational.
            tolerance /= Integer(1) << 16;
        }
    }
    return {lo, hi};
}

}  // namespace

Enclosure ln_enclosure(const Integer& n, const Rational& max_width, LnMethod method) {
    if (n < 1) throw std::invalid_argument("ln_enclosure requires n >= 1");
    if (max_width <= 0) throw std::invalid_argument("max_width must be positive");
    if (n == 1) return {0, 0};
    switch (method) {
        case LnMethod::AtanhSeries: return ln_atanh(n, max_width);
        case LnMethod::ExpBisection: return ln_bisection(n, max_width);
    }
    throw std::invalid_argument("unknown ln method");
}

}  // namespace absnorm
