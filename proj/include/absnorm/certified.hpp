#ifndef ABSNORM_CERTIFIED_HPP
#define ABSNORM_CERTIFIED_HPP

#include "absnorm/exact.hpp"

namespace absnorm {

/// Closed rational interval [lo, hi] known to contain an irrational quantity.
struct Enclosure {
    Rational lo;
    Rational hi;

    Rational width() const { return hi - lo; }
    bool contains(const Rational& q) const { return lo <= q && q <= hi; }
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
/// Scaling by a nonnegative rational.
Enclosure operator*(const Rational& c, const Enclosure& a);

/// e^x by Taylor series with an explicit remainder bound; width <= max_width.
/// Negative arguments use the alternating series directly.
Enclosure exp_enclosure(const Rational& x, const Rational& max_width);

enum class LnMethod {
    AtanhSeries,   // ln n = e ln 2 + 2 atanh((m-1)/(m+1)), m = n / 2^e in [1,2)
    ExpBisection,  // bisection on y with certified e^y compared against n
};

/// ln n for an integer n >= 1, with width <= max_width.
Enclosure ln_enclosure(const Integer& n, const Rational& max_width, LnMethod method);

}  // namespace absnorm

#endif
