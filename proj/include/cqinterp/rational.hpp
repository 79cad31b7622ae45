#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <string>
#include <vector>

namespace cqi {

using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Exact conversion; every finite double is a dyadic rational.
inline Rat rat_from_double(double v) {
    Rat r;
    mpq_set_d(r.get_mpq_t(), v);
    return r;
}

inline double to_double(const Rat& r) { return r.get_d(); }

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// Parses "p", "p/q" and plain decimals like "-3.63" or "12.", exactly.
Rat parse_rational(const std::string& s);

// Best rational approximation of v with denominator <= denom_bound,
// preferring the earliest continued-fraction convergent within snap_tol.
// snap_tol <= 0 disables snapping (pure best approximation).
Rat rationalize_value(double v, unsigned long denom_bound, double snap_tol);

// Scales a rational vector so entries become coprime integers (sign kept).
// Zero vectors are returned unchanged.
std::vector<Rat> to_coprime_integers(const std::vector<Rat>& v);

} // namespace cqi
