#include "uq/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uq/rng.hpp"

namespace uq::eval {
namespace {

constexpr std::uint64_t kSaltCalibSweep = 0x63737700;

void check_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw Error(ErrorCode::LengthMismatch,
                    std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

// Welford accumulator; constant inputs give exactly zero variance.
struct RunningStats {
    double mean_ = 0.0;
    double m2_ = 0.0;
    std::size_t n = 0;

    void add(double x) {
        ++n;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n);
        m2_ += delta * (x - mean_);
    }
    double mean() const { return mean_; }
    // Population std (divide by n).
    double stddev() const {
        if (n == 0 || m2_ <= 0.0) return 0.0;
        return std::sqrt(m2_ / static_cast<double>(n));
    }
};

}  // namespace

double empirical_coverage(const std::vector<conformal::PredictionSet>& sets,
                          const std::vector<std::size_t>& labels) {
    check_same_length(sets.size(), labels.size(), "sets vs labels");
    if (sets.empty()) {
        throw Error(ErrorCode::LengthMismatch, "empty inputs");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].contains(labels[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(sets.size());
}

StratifiedStats stratify_uncertainty(const std::vector<double>& uncertainties,
                                     const std::vector<std::size_t>& predicted_labels,
                                     const std::vector<std::size_t>& true_labels,
                                     const std::vector<std::uint8_t>& empty_mask) {
    check_same_length(uncertainties.size(), predicted_labels.size(), "uncertainties vs predicted");
    check_same_length(uncertainties.size(), true_labels.size(), "uncertainties vs labels");
    check_same_length(uncertainties.size(), empty_mask.size(), "uncertainties vs empty mask");

    RunningStats correct;
    RunningStats wrong;
    StratifiedStats stats;
    for (std::size_t i = 0; i < uncertainties.size(); ++i) {
        if (empty_mask[i]) {
            ++stats.excluded_empty;
            continue;
        }
        if (predicted_labels[i] == true_labels[i]) {
            correct.add(uncertainties[i]);
        } else {
            wrong.add(uncertainties[i]);
        }
    }
    stats.mean_correct = correct.mean();
    stats.std_correct = correct.stddev();
    stats.mean_wrong = wrong.mean();
    stats.std_wrong = wrong.stddev();
    stats.n_correct = correct.n;
    stats.n_wrong = wrong.n;
    return stats;
}

SetSizeStats set_size_stats(const std::vector<conformal::PredictionSet>& sets,
                            const std::vector<std::size_t>& predicted_labels,
                            const std::vector<std::size_t>& true_labels) {
    check_same_length(sets.size(), predicted_labels.size(), "sets vs predicted");
    check_same_length(sets.size(), true_labels.size(), "sets vs labels");
    if (sets.empty()) {
        throw Error(ErrorCode::LengthMismatch, "empty inputs");
    }
    RunningStats correct;
    RunningStats wrong;
    RunningStats all;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const auto size = static_cast<double>(sets[i].k_star);
        all.add(size);
        if (predicted_labels[i] == true_labels[i]) {
            correct.add(size);
        } else {
            wrong.add(size);
        }
    }
    return {correct.mean(), wrong.mean(), all.mean()};
}

std::vector<AlphaSweepPoint> alpha_sweep(const LabeledScores& calibration,
                                         const LabeledScores& test,
                                         const std::vector<double>& alphas,
                                         const conformal::ScoringConfig& config) {
    if (alphas.empty()) {
        throw Error(ErrorCode::InvalidConfig, "alpha grid is empty");
    }
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] >= 0.0 && alphas[i] <= 1.0)) {
            throw Error(ErrorCode::InvalidAlpha, "alpha grid value outside [0,1]");
        }
        if (i > 0 && !(alphas[i] > alphas[i - 1])) {
            throw Error(ErrorCode::InvalidConfig, "alpha grid must be strictly increasing");
        }
    }
    if (calibration.classes() != test.classes()) {
        throw Error(ErrorCode::ClassCountMismatch, "calibration and test K differ");
    }

    std::vector<AlphaSweepPoint> points;
    points.reserve(alphas.size());
    for (double alpha : alphas) {
        const auto calibrator = conformal::calibrate(calibration, alpha, config);
        AlphaSweepPoint point;
        point.alpha = alpha;
        for (std::size_t i = 0; i < test.size(); ++i) {
            const auto set = conformal::predict_set(test.scores().row(i), calibrator);
            if (set.k_star == 0) {
                ++point.empty;
            } else if (set.k_star == 1) {
                ++point.certain;
            } else {
                ++point.uncertain;
            }
        }
        points.push_back(point);
    }
    return points;
}

std::vector<CalibSizeSweepPoint> calibration_size_sweep(
    const LabeledScores& pool, const std::vector<std::size_t>& sizes, std::size_t test_size,
    std::size_t resamples, double alpha, const conformal::ScoringConfig& config,
    std::uint64_t seed) {
    if (sizes.empty()) {
        throw Error(ErrorCode::InvalidConfig, "size grid is empty");
    }
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (!(sizes[i] > sizes[i - 1])) {
            throw Error(ErrorCode::InvalidConfig, "size grid must be strictly increasing");
        }
    }
    if (resamples < 2) {
        throw Error(ErrorCode::InvalidConfig, "need at least 2 resamples");
    }
    if (test_size < 1) {
        throw Error(ErrorCode::InvalidConfig, "test_size must be >= 1");
    }
    const std::size_t largest = sizes.back();
    if (largest + test_size > pool.size()) {
        throw Error(ErrorCode::InsufficientPool,
                    "pool of " + std::to_string(pool.size()) + " cannot supply " +
                        std::to_string(largest) + " calibration + " +
                        std::to_string(test_size) + " test samples");
    }

    const std::size_t k = pool.classes();
    std::vector<std::size_t> indices(pool.size());

    std::vector<CalibSizeSweepPoint> points;
    points.reserve(sizes.size());
    for (std::size_t size_idx = 0; size_idx < sizes.size(); ++size_idx) {
        const std::size_t calib_size = sizes[size_idx];
        RunningStats coverage;
        for (std::size_t rep = 0; rep < resamples; ++rep) {
            Rng rng = Rng::substream(seed, kSaltCalibSweep, size_idx, rep);
            std::iota(indices.begin(), indices.end(), std::size_t{0});
            // Fisher-Yates; only the first calib_size + test_size entries matter.
            for (std::size_t i = 0; i + 1 < indices.size(); ++i) {
                const std::size_t j = i + rng.below(indices.size() - i);
                std::swap(indices[i], indices[j]);
            }

            std::vector<double> calib_flat(calib_size * k);
            std::vector<std::size_t> calib_labels(calib_size);
            for (std::size_t i = 0; i < calib_size; ++i) {
                const auto row = pool.scores().row(indices[i]);
                std::copy(row.begin(), row.end(), calib_flat.begin() + i * k);
                calib_labels[i] = pool.labels()[indices[i]];
            }
            const LabeledScores calib(validate_scores(std::move(calib_flat), k),
                                      std::move(calib_labels));
            const auto calibrator = conformal::calibrate(calib, alpha, config);

            std::size_t hits = 0;
            for (std::size_t i = 0; i < test_size; ++i) {
                const std::size_t idx = indices[calib_size + i];
                const auto set = conformal::predict_set(pool.scores().row(idx), calibrator);
                if (set.contains(pool.labels()[idx])) ++hits;
            }
            coverage.add(static_cast<double>(hits) / static_cast<double>(test_size));
        }
        points.push_back({calib_size, coverage.mean(), coverage.stddev()});
    }
    return points;
}

std::vector<std::size_t> histogram(const std::vector<double>& values, std::size_t n_bins) {
    if (n_bins < 1) {
        throw Error(ErrorCode::InvalidConfig, "n_bins must be >= 1");
    }
    std::vector<std::size_t> counts(n_bins, 0);
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error(ErrorCode::ValueOutOfRange,
                        "value " + std::to_string(v) + " outside [0,1]");
        }
        auto bin = static_cast<std::size_t>(v * static_cast<double>(n_bins));
        if (bin >= n_bins) bin = n_bins - 1;  // v == 1.0 lands in the last bin
        ++counts[bin];
    }
    return counts;
}

MethodComparison compare_methods(const LabeledScores& data,
                                 const std::vector<SampleStack>& stacks,
                                 const std::vector<EvidenceVector>& evidence,
                                 const conformal::Calibrator& calibrator) {
    const std::size_t n = data.size();
    if (stacks.size() != n || evidence.size() != n) {
        throw Error(ErrorCode::AlignmentMismatch,
                    "scores/stacks/evidence sizes differ: " + std::to_string(n) + "/" +
                        std::to_string(stacks.size()) + "/" + std::to_string(evidence.size()));
    }
    const std::size_t k = data.classes();

    MethodComparison result;
    result.per_sample.resize(n);
    std::vector<double> cp_u(n), mcd_u(n), edl_u(n);
    std::vector<std::size_t> cp_pred(n), mcd_pred(n), edl_pred(n);
    std::vector<std::uint8_t> cp_empty(n, 0), none_empty(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        const auto row = data.scores().row(i);
        const auto set = conformal::predict_set(row, calibrator);
        cp_u[i] = set.uncertainty;
        cp_pred[i] = predicted_label(row);
        cp_empty[i] = set.k_star == 0 ? 1 : 0;

        if (stacks[i].classes() != k) {
            throw Error(ErrorCode::AlignmentMismatch, "stack class count differs from scores");
        }
        const auto mcd = baselines::mcd_summarize(stacks[i]);
        mcd_u[i] = mcd.uncertainty;
        mcd_pred[i] = mcd.predicted;

        if (evidence[i].classes() != k) {
            throw Error(ErrorCode::AlignmentMismatch, "evidence class count differs from scores");
        }
        const auto edl = baselines::edl_summarize(evidence[i]);
        edl_u[i] = edl.uncertainty;
        edl_pred[i] = edl.predicted;

        result.per_sample[i] = {cp_u[i], mcd_u[i], edl_u[i], cp_empty[i] != 0};
    }

    result.cp = stratify_uncertainty(cp_u, cp_pred, data.labels(), cp_empty);
    result.mcd = stratify_uncertainty(mcd_u, mcd_pred, data.labels(), none_empty);
    result.edl = stratify_uncertainty(edl_u, edl_pred, data.labels(), none_empty);
    return result;
}

}  // namespace uq::eval
