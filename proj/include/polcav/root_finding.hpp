#ifndef POLCAV_ROOT_FINDING_HPP
#define POLCAV_ROOT_FINDING_HPP

#include <functional>

namespace polcav {

// Bisection on [a, b] assuming f(a) and f(b) have opposite signs.
// Runs until the bracket collapses to adjacent doubles (or f(mid) == 0),
// so the returned point carries essentially no residual for smooth f.
inline double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    if (fa == 0.0) return a;
    if (f(b) == 0.0) return b;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;  // bracket exhausted
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace polcav

#endif
