#include "uq/special.hpp"

#include <cmath>
#include <limits>

namespace uq {

// Both functions shift the argument up by the recurrence until x >= 10 and
// then apply the Bernoulli asymptotic series through B12; truncation error
// is below 1e-14 there.

double digamma(double x) {
    if (!(x > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double r2 = 1.0 / (x * x);
    result += std::log(x) - 0.5 / x;
    result -= r2 * (1.0 / 12.0 -
                    r2 * (1.0 / 120.0 -
                          r2 * (1.0 / 252.0 -
                                r2 * (1.0 / 240.0 -
                                      r2 * (1.0 / 132.0 - r2 * (691.0 / 32760.0))))));
    return result;
}

double trigamma(double x) {
    if (!(x > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    double result = 0.0;
    while (x < 10.0) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    const double r = 1.0 / x;
    const double r2 = r * r;
    result += r + 0.5 * r2;
    result += r * r2 * (1.0 / 6.0 -
                        r2 * (1.0 / 30.0 -
                              r2 * (1.0 / 42.0 -
                                    r2 * (1.0 / 30.0 -
                                          r2 * (5.0 / 66.0 - r2 * (691.0 / 2730.0))))));
    return result;
}

}  // namespace uq
