#pragma once

#include <cstdint>
#include <vector>

#include "uq/baselines.hpp"
#include "uq/conformal.hpp"
#include "uq/scores.hpp"

namespace uq::eval {

// Uncertainty statistics split by argmax-correctness. Samples flagged empty
// (conformal empty sets) are excluded from both partitions and counted
// separately; means and stds are population statistics.
struct StratifiedStats {
    double mean_correct = 0.0;
    double std_correct = 0.0;
    double mean_wrong = 0.0;
    double std_wrong = 0.0;
    std::size_t n_correct = 0;
    std::size_t n_wrong = 0;
    std::size_t excluded_empty = 0;
};

// Fraction of samples whose true label lies in its prediction set; empty
// sets count as misses.
double empirical_coverage(const std::vector<conformal::PredictionSet>& sets,
                          const std::vector<std::size_t>& labels);

StratifiedStats stratify_uncertainty(const std::vector<double>& uncertainties,
                                     const std::vector<std::size_t>& predicted_labels,
                                     const std::vector<std::size_t>& true_labels,
                                     const std::vector<std::uint8_t>& empty_mask);

// Mean set size over correct / wrong / all samples (correctness by argmax).
struct SetSizeStats {
    double c_correct = 0.0;
    double c_wrong = 0.0;
    double c_average = 0.0;
};

SetSizeStats set_size_stats(const std::vector<conformal::PredictionSet>& sets,
                            const std::vector<std::size_t>& predicted_labels,
                            const std::vector<std::size_t>& true_labels);

// One point of the confidence-level sweep: how many test sets came out as
// singletons (certain), multi-label (uncertain), or empty.
struct AlphaSweepPoint {
    double alpha = 0.0;
    std::size_t certain = 0;
    std::size_t uncertain = 0;
    std::size_t empty = 0;
};

// Recalibrates per alpha on the same calibration data and classifies the
// test prediction sets. alphas must be strictly increasing within [0,1].
std::vector<AlphaSweepPoint> alpha_sweep(const LabeledScores& calibration,
                                         const LabeledScores& test,
                                         const std::vector<double>& alphas,
                                         const conformal::ScoringConfig& config);

struct CalibSizeSweepPoint {
    std::size_t calib_size = 0;
    double mean_coverage = 0.0;
    double std_coverage = 0.0;
};

// For each size: R resamples, each drawing a disjoint calibration/test
// split from the pool (calib_size + test_size <= pool size), recalibrating
// and measuring empirical coverage. Deterministic per (seed, size, repeat).
std::vector<CalibSizeSweepPoint> calibration_size_sweep(
    const LabeledScores& pool, const std::vector<std::size_t>& sizes, std::size_t test_size,
    std::size_t resamples, double alpha, const conformal::ScoringConfig& config,
    std::uint64_t seed);

// Equal-width bins over [0,1]; the final bin is right-inclusive. Values
// outside [0,1] raise ValueOutOfRange.
std::vector<std::size_t> histogram(const std::vector<double>& values, std::size_t n_bins);

// Per-sample uncertainty assigned by each method; cp_empty marks samples
// whose conformal set was empty (their cp_uncertainty is excluded from
// stratified statistics).
struct MethodTriple {
    double cp_uncertainty = 0.0;
    double mcd_uncertainty = 0.0;
    double edl_uncertainty = 0.0;
    bool cp_empty = false;
};

struct MethodComparison {
    StratifiedStats cp;
    StratifiedStats mcd;
    StratifiedStats edl;
    std::vector<MethodTriple> per_sample;
};

// Runs conformal set-size uncertainty, MCD predicted-class variance, and
// EDL u = K/S over the same samples. Each method is stratified by its own
// argmax prediction against the shared ground-truth labels.
MethodComparison compare_methods(const LabeledScores& data,
                                 const std::vector<SampleStack>& stacks,
                                 const std::vector<EvidenceVector>& evidence,
                                 const conformal::Calibrator& calibrator);

}  // namespace uq::eval
