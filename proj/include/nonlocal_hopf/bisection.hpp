#pragma once

#include <cmath>
#include <string>

#include "nonlocal_hopf/errors.hpp"

namespace nlhopf {

/// Root of f on [lo, hi] by bisection.  f(lo) and f(hi) must have opposite
/// signs (or one of them be zero).  Iterates until the bracket is no wider
/// than tol or stops shrinking in floating point.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi) || !std::isfinite(flo) || !std::isfinite(fhi)) {
        throw BracketError("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                           "]: f = " + std::to_string(flo) + ", " + std::to_string(fhi));
    }
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return std::abs(flo) <= std::abs(f(hi)) ? lo : hi;
}

}  // namespace nlhopf
