#pragma once

#include <span>
#include <vector>

#include "uq/scores.hpp"

namespace uq::baselines {

// Aggregate of T stochastic forward passes: per-class mean and population
// variance, and the scalar uncertainty read off at the mean-predicted class.
struct McdSummary {
    std::vector<double> mean;
    std::vector<double> variance;
    double uncertainty = 0.0;
    std::size_t predicted = 0;  // argmax of mean, lowest index on ties
};

McdSummary mcd_summarize(const SampleStack& stack);

// Subjective-logic view of an evidence vector: belief masses b_k = e_k/S,
// uncertainty u = K/S, Dirichlet parameters alpha_k = e_k + 1, and the
// Dirichlet expectation alpha_k/S. u + sum(b) == 1 by construction.
struct EdlSummary {
    std::vector<double> belief;
    double uncertainty = 0.0;
    std::vector<double> dirichlet_alpha;
    double strength = 0.0;
    std::vector<double> expected_probs;
    std::size_t predicted = 0;  // argmax of expected_probs
};

EdlSummary edl_summarize(const EvidenceVector& evidence);

// log D(p | alpha) evaluated via log-gamma. p must be strictly interior to
// the simplex and alpha strictly positive.
double dirichlet_log_density(std::span<const double> p, std::span<const double> alpha);

// KL[ Dir(alpha_tilde) || Dir(1,...,1) ]; zero iff alpha_tilde is all ones.
double edl_kl_to_uniform(std::span<const double> alpha_tilde);

// Evidential mean-square-error loss with uniform-Dirichlet KL regularizer:
//   sum_j (y_j - alpha_j/S)^2 + alpha_j(S - alpha_j)/(S^2 (S+1))
//   + kl_weight * KL(alpha_tilde), alpha_tilde = y + (1-y) .* alpha.
double edl_loss(const EvidenceVector& evidence, std::span<const double> onehot,
                double kl_weight);

// Analytic d(edl_loss)/d(e_k); finite-difference checked in the test suite.
std::vector<double> edl_loss_gradient(const EvidenceVector& evidence,
                                      std::span<const double> onehot, double kl_weight);

}  // namespace uq::baselines
