#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

namespace effcap::search {

struct RootResult {
    double x;
    double fx;
    std::size_t iterations;
};

/// Brent's bracketed root finder.
///
/// Requires f(lo) and f(hi) of opposite sign. Stops when |f(x)| <= ftol or
/// the bracket has shrunk to a few ulps; the caller checks `fx` in the latter
/// case.
template <class F>
RootResult brent_root(F&& f, double lo, double hi, double f_lo, double f_hi, double ftol,
                      std::size_t max_iter)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double a = lo, b = hi, c = hi;
    double fa = f_lo, fb = f_hi, fc = f_hi;
    double d = b - a, e = d;

    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        if (std::abs(fb) <= ftol)
            break;
        const double tol1 = 2.0 * eps * std::abs(b);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1)
            break;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < (min1 < min2 ? min1 : min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return {b, fb, iter};
}

struct MinimumResult {
    double x;
    double fx;
};

/// Golden-section minimization of a unimodal f on [a, b] until the bracket
/// is narrower than `xtol`.
template <class F>
MinimumResult golden_section_minimize(F&& f, double a, double b, double xtol)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        if (x1 == x2 || x1 <= a || x2 >= b)
            break;
    }
    return f1 <= f2 ? MinimumResult{x1, f1} : MinimumResult{x2, f2};
}

} // namespace effcap::search
