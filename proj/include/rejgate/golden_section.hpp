#pragma once

#include <cmath>
#include <cstddef>

#include "rejgate/error.hpp"

namespace rejgate {

struct ScalarMinimum {
    double x = 0.0;
    double fx = 0.0;
    std::size_t iterations = 0;
};

/// Golden-section search for the minimum of a unimodal f on [lo, hi].
/// Stops once the bracket is narrower than tol or after max_iterations.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double tol,
                                      std::size_t max_iterations) {
    if (!(lo < hi)) throw InvalidArgument("golden-section bracket requires lo < hi");
    if (!(tol > 0.0)) throw InvalidArgument("golden-section tolerance must be > 0");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);

    std::size_t it = 0;
    while (b - a > tol && it < max_iterations) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++it;
    }

    const double x = 0.5 * (a + b);
    ScalarMinimum best{x, f(x), it};
    if (fc < best.fx) best = {c, fc, it};
    if (fd < best.fx) best = {d, fd, it};
    return best;
}

}  // namespace rejgate
