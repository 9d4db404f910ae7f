#pragma once

#include <cmath>

namespace ap {

namespace detail {

template <class F>
double simpson_adapt(const F& f, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// adaptive Simpson for smooth integrands
template <class F>
double integrate(const F& f, double a, double b, double tol = 1e-12) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_adapt(f, a, b, fa, fm, fb, whole, tol, 26);
}

}  // namespace ap
