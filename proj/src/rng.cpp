#include "uq/rng.hpp"

#include <cmath>

namespace uq {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
    return 1.0 - uniform();
}

double Rng::normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

double Rng::gamma(double shape) {
    if (shape < 1.0) {
        // Gamma(a) = Gamma(a+1) * U^(1/a)
        const double boosted = gamma(shape + 1.0);
        return boosted * std::pow(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = uniform_pos();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

void Rng::dirichlet(double concentration, std::span<double> out) {
    double sum = 0.0;
    for (double& v : out) {
        v = gamma(concentration);
        sum += v;
    }
    if (sum <= 0.0) {
        // All draws underflowed to zero (tiny concentration); fall back to
        // a single unit mass so the row is still a valid distribution.
        const std::size_t k = below(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (i == k) ? 1.0 : 0.0;
        return;
    }
    for (double& v : out) v /= sum;
}

std::uint64_t Rng::below(std::uint64_t n) {
    // Rejection-free would bias tiny moduli; n here is always small (class
    // counts, pool sizes), so rejection sampling terminates immediately.
    const std::uint64_t limit = n * ((~0ULL) / n);
    for (;;) {
        const std::uint64_t x = engine_();
        if (x < limit) return x % n;
    }
}

}  // namespace uq
