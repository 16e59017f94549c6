#pragma once

#include <cstdint>
#include <vector>

#include "uq/scores.hpp"

namespace uq::synth {

// Synthetic classifier oracle. Each sample draws a symmetric
// Dirichlet(concentration) probability row, picks a uniform true label, adds
// `signal` to that label's coordinate, and renormalizes. concentration sets
// the spread of the rows; signal sets the accuracy (0 = chance level).
struct OracleConfig {
    std::size_t k_classes = 2;
    double concentration = 1.0;
    double signal = 0.0;
    std::uint64_t seed = 0;
};

void check_config(const OracleConfig& config);

// Deterministic for a fixed config: sample i is drawn from substream
// (seed, i), so output is identical regardless of evaluation order and
// thread count.
LabeledScores generate(const OracleConfig& config, std::size_t n, unsigned threads = 1);

// Covariate-shift emulation in score space: rows are flattened (or
// sharpened) by p -> p^(1/temperature); label_corruption optionally
// resamples the stored true label uniformly, emulating semantic shift.
struct ShiftConfig {
    double temperature = 1.0;
    double label_corruption = 0.0;
};

void check_config(const ShiftConfig& config);

LabeledScores shift(const LabeledScores& data, const ShiftConfig& config, std::uint64_t seed);

// T copies of the row perturbed by Gaussian jitter in log space and
// renormalized; jitter = 0 yields T bitwise-identical rows.
SampleStack generate_mcd_stack(std::span<const double> row, std::size_t t_passes,
                               double jitter, std::uint64_t seed);

// Per-row evidence e_k = scale * p_k; scale = 0 is the zero-evidence
// endpoint (u = 1 everywhere).
std::vector<EvidenceVector> generate_evidence(const LabeledScores& data, double scale);

}  // namespace uq::synth
