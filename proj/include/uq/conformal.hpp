#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uq/scores.hpp"

namespace uq::conformal {

enum class Variant { Aps, Raps };

// Nonconformity scoring configuration. lambda and k_reg only apply to RAPS;
// APS ignores them.
struct ScoringConfig {
    Variant variant = Variant::Aps;
    double lambda = 0.0;
    int k_reg = 1;

    static ScoringConfig aps() { return {Variant::Aps, 0.0, 1}; }
    static ScoringConfig raps(double lambda, int k_reg) {
        return {Variant::Raps, lambda, k_reg};
    }
};

void check_config(const ScoringConfig& config);

// Class indices of one row ordered by descending probability, ties broken
// toward the lowest index. Rank r (1-based) of class order[r-1].
std::vector<std::size_t> descending_order(std::span<const double> row);

// Cumulative sum of descending-sorted probabilities down to and including
// the true label's rank (Adaptive Prediction Sets score).
double aps_score(std::span<const double> row, std::size_t label);

// APS score plus lambda per included rank strictly above k_reg
// (Regularized Adaptive Prediction Sets score). Equals aps_score at lambda=0.
double raps_score(std::span<const double> row, std::size_t label, double lambda, int k_reg);

// Dispatch on config.variant.
double nonconformity_score(const ScoringConfig& config, std::span<const double> row,
                           std::size_t label);

// Order-statistic rank k = ceil((1+N)(1-alpha)); may be 0 or exceed N at
// the alpha endpoints.
std::size_t quantile_rank(std::size_t n, double alpha);

// The k-th smallest calibration score with k = quantile_rank(N, alpha).
// Boundary conventions: k > N yields +infinity (prediction sets will contain
// every class); k <= 0 yields 0 (empty sets).
double conformal_quantile(std::vector<double> calibration_scores, double alpha);

// Frozen split-conformal state: once fitted, a Calibrator never changes.
class Calibrator {
public:
    Calibrator(double alpha, ScoringConfig config, double q_hat, std::size_t n_calib,
               std::size_t k_classes);

    double alpha() const noexcept { return alpha_; }
    const ScoringConfig& config() const noexcept { return config_; }
    double q_hat() const noexcept { return q_hat_; }
    std::size_t n_calib() const noexcept { return n_calib_; }
    std::size_t k_classes() const noexcept { return k_classes_; }

private:
    double alpha_;
    ScoringConfig config_;
    double q_hat_;
    std::size_t n_calib_;
    std::size_t k_classes_;
};

// Scores every calibration pair with its true label and freezes the
// quantile. alpha must lie in [0,1].
Calibrator calibrate(const LabeledScores& calibration, double alpha,
                     const ScoringConfig& config);

// Ordered subset of classes whose regularized cumulative probability stays
// within q_hat; may be empty.
struct PredictionSet {
    std::vector<std::size_t> members;  // descending-probability inclusion order
    std::size_t k_star = 0;
    double uncertainty = 0.0;  // k_star / K

    bool contains(std::size_t label) const {
        for (std::size_t m : members)
            if (m == label) return true;
        return false;
    }
};

PredictionSet predict_set(std::span<const double> row, const Calibrator& calibrator);

// Set-size uncertainty k*/K; accepts fractional k* so it also applies to
// mean set sizes.
double set_uncertainty(double k_star, std::size_t k_classes);

// Finite-sample guarantee band for P(Y in T(x)).
struct CoverageBound {
    double lower;  // 1 - alpha
    double upper;  // 1 - alpha + 1/(1+N); may exceed 1
};

CoverageBound coverage_bound(double alpha, std::size_t n_calib);

// Flat key=value persistence record (format documented in docs/FORMATS.md).
// Round-trips every field bit-exactly, including the +infinity sentinel.
std::string to_record(const Calibrator& calibrator);
Calibrator from_record(const std::string& text);

}  // namespace uq::conformal
