#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uq/error.hpp"

namespace uq {

// Row-sum tolerances for probability vectors. Raw rows may deviate from 1 by
// up to kRowSumTolerance (serialization loss); rows already within
// kRenormSkipTolerance are passed through untouched so that validation is
// bitwise idempotent.
inline constexpr double kRowSumTolerance = 1e-3;
inline constexpr double kRenormSkipTolerance = 1e-12;

// N x K matrix of class probabilities; every row is a point on the
// K-simplex. Construct through validate_scores(); immutable afterwards.
class ScoreMatrix {
public:
    std::size_t rows() const noexcept { return rows_; }
    std::size_t classes() const noexcept { return classes_; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * classes_, classes_};
    }

    const std::vector<double>& data() const noexcept { return data_; }

    friend ScoreMatrix validate_scores(const std::vector<std::vector<double>>& raw);
    friend ScoreMatrix validate_scores(std::vector<double> flat, std::size_t classes);

    friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;

private:
    ScoreMatrix(std::vector<double> data, std::size_t rows, std::size_t classes)
        : data_(std::move(data)), rows_(rows), classes_(classes) {}

    std::vector<double> data_;
    std::size_t rows_ = 0;
    std::size_t classes_ = 0;
};

// Validates and renormalizes a raw matrix. Rejects non-rectangular input,
// negative or non-finite entries, and rows whose sum is off by more than
// kRowSumTolerance. Accepted rows are divided by their sum unless already
// within kRenormSkipTolerance of 1.
ScoreMatrix validate_scores(const std::vector<std::vector<double>>& raw);
ScoreMatrix validate_scores(std::vector<double> flat, std::size_t classes);

// Argmax with ties broken toward the lowest class index.
std::size_t predicted_label(std::span<const double> row);

// Scores paired with ground-truth labels; the calibration/test unit.
class LabeledScores {
public:
    LabeledScores(ScoreMatrix scores, std::vector<std::size_t> labels);

    const ScoreMatrix& scores() const noexcept { return scores_; }
    const std::vector<std::size_t>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t classes() const noexcept { return scores_.classes(); }

    friend bool operator==(const LabeledScores&, const LabeledScores&) = default;

private:
    ScoreMatrix scores_;
    std::vector<std::size_t> labels_;
};

// T stochastic forward passes over the same input, one probability row each.
class SampleStack {
public:
    static SampleStack validated(std::vector<std::vector<double>> raw);

    std::size_t passes() const noexcept { return matrix_.rows(); }
    std::size_t classes() const noexcept { return matrix_.classes(); }
    std::span<const double> pass(std::size_t t) const { return matrix_.row(t); }

private:
    explicit SampleStack(ScoreMatrix matrix) : matrix_(std::move(matrix)) {}
    ScoreMatrix matrix_;
};

// Non-negative per-class evidence mass; alpha_k = e_k + 1 and the Dirichlet
// strength S = sum(alpha) are derived.
class EvidenceVector {
public:
    static EvidenceVector validated(std::vector<double> evidence);

    std::size_t classes() const noexcept { return evidence_.size(); }
    std::span<const double> evidence() const noexcept { return evidence_; }
    double strength() const noexcept { return strength_; }

private:
    explicit EvidenceVector(std::vector<double> evidence);
    std::vector<double> evidence_;
    double strength_ = 0.0;
};

}  // namespace uq
