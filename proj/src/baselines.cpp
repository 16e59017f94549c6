#include "uq/baselines.hpp"

#include <cmath>
#include <string>

#include "uq/special.hpp"

namespace uq::baselines {
namespace {

void check_onehot(std::span<const double> onehot, std::size_t k_classes) {
    if (onehot.size() != k_classes) {
        throw Error(ErrorCode::LengthMismatch,
                    "one-hot has " + std::to_string(onehot.size()) + " entries for K=" +
                        std::to_string(k_classes));
    }
    std::size_t ones = 0;
    for (double y : onehot) {
        if (y == 1.0) {
            ++ones;
        } else if (y != 0.0) {
            throw Error(ErrorCode::InvalidOneHot, "entries must be exactly 0 or 1");
        }
    }
    if (ones != 1) {
        throw Error(ErrorCode::InvalidOneHot,
                    "expected exactly one 1, found " + std::to_string(ones));
    }
}

void check_alpha(std::span<const double> alpha, double min_value) {
    if (alpha.size() < 2) {
        throw Error(ErrorCode::InvalidAlpha, "need K >= 2 parameters");
    }
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (!std::isfinite(alpha[k]) || alpha[k] < min_value) {
            throw Error(ErrorCode::InvalidAlpha,
                        "alpha[" + std::to_string(k) + "] = " + std::to_string(alpha[k]));
        }
    }
}

}  // namespace

McdSummary mcd_summarize(const SampleStack& stack) {
    const std::size_t t_passes = stack.passes();
    const std::size_t k = stack.classes();
    if (t_passes == 0) {
        throw Error(ErrorCode::EmptyStack, "no passes");
    }

    McdSummary summary;
    summary.mean.assign(k, 0.0);
    summary.variance.assign(k, 0.0);

    // Accumulate shifted by the first pass: constant stacks then yield the
    // row bitwise and a variance of exactly zero.
    const auto first = stack.pass(0);
    for (std::size_t t = 1; t < t_passes; ++t) {
        const auto pass = stack.pass(t);
        for (std::size_t c = 0; c < k; ++c) summary.mean[c] += pass[c] - first[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        summary.mean[c] = first[c] + summary.mean[c] / static_cast<double>(t_passes);
    }

    // Population variance, divisor T (not T-1).
    for (std::size_t t = 0; t < t_passes; ++t) {
        const auto pass = stack.pass(t);
        for (std::size_t c = 0; c < k; ++c) {
            const double d = pass[c] - summary.mean[c];
            summary.variance[c] += d * d;
        }
    }
    for (double& v : summary.variance) v /= static_cast<double>(t_passes);

    summary.predicted = predicted_label(summary.mean);
    summary.uncertainty = summary.variance[summary.predicted];
    return summary;
}

EdlSummary edl_summarize(const EvidenceVector& evidence) {
    const auto e = evidence.evidence();
    const std::size_t k = e.size();
    const double strength = evidence.strength();

    EdlSummary summary;
    summary.strength = strength;
    summary.uncertainty = static_cast<double>(k) / strength;
    summary.belief.resize(k);
    summary.dirichlet_alpha.resize(k);
    summary.expected_probs.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        summary.belief[c] = e[c] / strength;
        summary.dirichlet_alpha[c] = e[c] + 1.0;
        summary.expected_probs[c] = summary.dirichlet_alpha[c] / strength;
    }
    summary.predicted = predicted_label(summary.expected_probs);
    return summary;
}

double dirichlet_log_density(std::span<const double> p, std::span<const double> alpha) {
    check_alpha(alpha, std::nextafter(0.0, 1.0));
    if (p.size() != alpha.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    "p has " + std::to_string(p.size()) + " entries, alpha has " +
                        std::to_string(alpha.size()));
    }
    double log_density = 0.0;
    double alpha_sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!(p[k] > 0.0)) {
            throw Error(ErrorCode::BoundaryPoint,
                        "p[" + std::to_string(k) + "] = " + std::to_string(p[k]) +
                            " is not interior");
        }
        alpha_sum += alpha[k];
        log_density += (alpha[k] - 1.0) * std::log(p[k]) - std::lgamma(alpha[k]);
    }
    return log_density + std::lgamma(alpha_sum);
}

double edl_kl_to_uniform(std::span<const double> alpha_tilde) {
    check_alpha(alpha_tilde, 1.0);
    const auto k = static_cast<double>(alpha_tilde.size());
    double sum = 0.0;
    for (double a : alpha_tilde) sum += a;

    double kl = std::lgamma(sum) - std::lgamma(k);
    const double psi_sum = digamma(sum);
    for (double a : alpha_tilde) {
        kl -= std::lgamma(a);
        kl += (a - 1.0) * (digamma(a) - psi_sum);
    }
    // Exact zero at the uniform point; tiny negatives are rounding noise.
    return kl < 0.0 ? 0.0 : kl;
}

namespace {

std::vector<double> modified_alpha(std::span<const double> e, std::span<const double> onehot) {
    std::vector<double> tilde(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
        tilde[k] = onehot[k] == 1.0 ? 1.0 : e[k] + 1.0;
    }
    return tilde;
}

}  // namespace

double edl_loss(const EvidenceVector& evidence, std::span<const double> onehot,
                double kl_weight) {
    check_onehot(onehot, evidence.classes());
    if (!(kl_weight >= 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "kl_weight must be >= 0");
    }
    const auto e = evidence.evidence();
    const double strength = evidence.strength();

    double loss = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
        const double alpha = e[k] + 1.0;
        const double mean = alpha / strength;
        const double residual = onehot[k] - mean;
        loss += residual * residual;
        loss += alpha * (strength - alpha) / (strength * strength * (strength + 1.0));
    }
    if (kl_weight > 0.0) {
        loss += kl_weight * edl_kl_to_uniform(modified_alpha(e, onehot));
    }
    return loss;
}

std::vector<double> edl_loss_gradient(const EvidenceVector& evidence,
                                      std::span<const double> onehot, double kl_weight) {
    check_onehot(onehot, evidence.classes());
    if (!(kl_weight >= 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "kl_weight must be >= 0");
    }
    const auto e = evidence.evidence();
    const std::size_t k_classes = e.size();
    const double strength = evidence.strength();

    std::vector<double> mean(k_classes);
    double sq_mean_sum = 0.0;       // sum_j m_j^2
    double weighted_residual = 0.0; // sum_j (m_j - y_j) m_j
    for (std::size_t k = 0; k < k_classes; ++k) {
        mean[k] = (e[k] + 1.0) / strength;
        sq_mean_sum += mean[k] * mean[k];
        weighted_residual += (mean[k] - onehot[k]) * mean[k];
    }

    const auto tilde = modified_alpha(e, onehot);
    double tilde_sum = 0.0;
    for (double a : tilde) tilde_sum += a;
    const double psi1_sum = trigamma(tilde_sum);
    const double kl_common = (tilde_sum - static_cast<double>(k_classes)) * psi1_sum;

    std::vector<double> grad(k_classes);
    for (std::size_t i = 0; i < k_classes; ++i) {
        // d/d alpha_i of sum_j (y_j - m_j)^2, with dm_j/d alpha_i = (delta_ij - m_j)/S
        double g = 2.0 / strength * ((mean[i] - onehot[i]) - weighted_residual);
        // d/d alpha_i of (1 - sum m^2)/(S+1)
        g -= (1.0 - sq_mean_sum) / ((strength + 1.0) * (strength + 1.0));
        g -= 2.0 / strength * (mean[i] - sq_mean_sum) / (strength + 1.0);
        // KL term only moves through alpha_tilde_i when y_i = 0
        if (kl_weight > 0.0 && onehot[i] == 0.0) {
            g += kl_weight * ((tilde[i] - 1.0) * trigamma(tilde[i]) - kl_common);
        }
        grad[i] = g;
    }
    return grad;
}

}  // namespace uq::baselines
