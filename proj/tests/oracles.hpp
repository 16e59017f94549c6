#pragma once

// Independent oracles used by the test suites. Everything here deliberately
// recomputes results through a different route than the library (full sorts
// instead of selection, long-double accumulation, exhaustive enumeration,
// quadrature) so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace oracles {

// Rank order by (probability desc, index asc) via explicit pair sort.
inline std::vector<std::size_t> rank_order(std::span<const double> row) {
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) keyed.emplace_back(-row[i], i);
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::size_t> order;
    order.reserve(row.size());
    for (const auto& [neg, idx] : keyed) order.push_back(idx);
    return order;
}

// Cumulative regularized score down to the true label's rank, by direct
// summation over the enumerated rank order.
inline double raps_score_brute(std::span<const double> row, std::size_t label, double lambda,
                               int k_reg) {
    const auto order = rank_order(row);
    double total = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t rank = i + 1;
        total += row[order[i]];
        if (rank > static_cast<std::size_t>(k_reg)) total += lambda;
        if (order[i] == label) break;
    }
    return total;
}

// k-th smallest via full sort.
inline double kth_smallest(std::vector<double> values, std::size_t k) {
    std::sort(values.begin(), values.end());
    return values[k - 1];
}

// Maximal prefix of the descending-sorted row whose regularized cumulative
// sum stays within q_hat, found by checking every prefix length.
inline std::size_t max_prefix_within(std::span<const double> row, double q_hat, double lambda,
                                     int k_reg) {
    const auto order = rank_order(row);
    std::size_t best = 0;
    for (std::size_t len = 1; len <= order.size(); ++len) {
        double total = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            total += row[order[i]];
            if (i + 1 > static_cast<std::size_t>(k_reg)) total += lambda;
        }
        if (total <= q_hat) best = len;
    }
    return best;
}

struct MeanVar {
    std::vector<double> mean;
    std::vector<double> variance;
};

// Two-pass mean/population-variance with long-double accumulation.
inline MeanVar mean_var_longdouble(const std::vector<std::vector<double>>& rows) {
    const std::size_t t = rows.size();
    const std::size_t k = rows.front().size();
    std::vector<long double> mean(k, 0.0L), var(k, 0.0L);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < k; ++c) mean[c] += row[c];
    for (auto& m : mean) m /= static_cast<long double>(t);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < k; ++c) {
            const long double d = row[c] - mean[c];
            var[c] += d * d;
        }
    for (auto& v : var) v /= static_cast<long double>(t);
    MeanVar out;
    out.mean.assign(mean.begin(), mean.end());
    out.variance.assign(var.begin(), var.end());
    return out;
}

struct Partition {
    double mean_correct, std_correct, mean_wrong, std_wrong;
    std::size_t n_correct, n_wrong, excluded;
};

// Stratification by explicit bucket lists.
inline Partition partition_brute(const std::vector<double>& u,
                                 const std::vector<std::size_t>& pred,
                                 const std::vector<std::size_t>& truth,
                                 const std::vector<unsigned char>& empty) {
    std::vector<double> correct, wrong;
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (empty[i]) {
            ++excluded;
        } else if (pred[i] == truth[i]) {
            correct.push_back(u[i]);
        } else {
            wrong.push_back(u[i]);
        }
    }
    auto stats = [](const std::vector<double>& xs) {
        if (xs.empty()) return std::pair<double, double>{0.0, 0.0};
        double m = 0.0;
        for (double x : xs) m += x;
        m /= static_cast<double>(xs.size());
        double v = 0.0;
        for (double x : xs) v += (x - m) * (x - m);
        v /= static_cast<double>(xs.size());
        return std::pair<double, double>{m, std::sqrt(v)};
    };
    const auto [mc, sc] = stats(correct);
    const auto [mw, sw] = stats(wrong);
    return {mc, sc, mw, sw, correct.size(), wrong.size(), excluded};
}

// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n) {
        nodes.resize(n);
        weights.resize(n);
        for (int i = 0; i < n; ++i) {
            // Initial guess (Chebyshev) then Newton on [-1,1].
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                const double deriv = n * (x * p1 - p0) / (x * x - 1.0);
                const double step = p1 / deriv;
                x -= step;
                if (std::abs(step) < 1e-15) break;
            }
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double deriv = n * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = 0.5 * (x + 1.0);
            weights[i] = 1.0 / ((1.0 - x * x) * deriv * deriv);
        }
    }
};

// Integral of f(p1, p2, p3) over the 2-simplex (p3 = 1 - p1 - p2) with the
// Lebesgue measure dp1 dp2, via the substitution p2 = (1 - p1) u.
template <typename F>
double simplex3_integral(F&& f, int n_nodes = 96) {
    const GaussLegendre gl(n_nodes);
    double total = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
        const double p1 = gl.nodes[i];
        const double w1 = gl.weights[i];
        const double width = 1.0 - p1;
        double inner = 0.0;
        for (int j = 0; j < n_nodes; ++j) {
            const double p2 = width * gl.nodes[j];
            const double p3 = 1.0 - p1 - p2;
            if (p3 <= 0.0) continue;
            inner += gl.weights[j] * f(p1, p2, p3);
        }
        total += w1 * width * inner;
    }
    return total;
}

// Central finite difference of a scalar function of a vector argument.
template <typename F>
std::vector<double> central_difference(F&& f, std::vector<double> x, double step) {
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + step;
        const double hi = f(x);
        x[i] = saved - step;
        const double lo = f(x);
        x[i] = saved;
        grad[i] = (hi - lo) / (2.0 * step);
    }
    return grad;
}

}  // namespace oracles
