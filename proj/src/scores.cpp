#include "uq/scores.hpp"

#include <cmath>
#include <string>

namespace uq {
namespace {

void check_row(std::span<const double> row, std::size_t row_index) {
    for (std::size_t c = 0; c < row.size(); ++c) {
        const double v = row[c];
        if (!std::isfinite(v) || v < 0.0) {
            throw Error(ErrorCode::NegativeEntry,
                        "row " + std::to_string(row_index) + ", col " + std::to_string(c) +
                            ": entry " + std::to_string(v) + " is negative or non-finite");
        }
    }
}

// Renormalizes one row in place; no-op when the sum is already within
// kRenormSkipTolerance so a second validation pass is bitwise identity.
void renormalize_row(std::span<double> row, std::size_t row_index) {
    double sum = 0.0;
    for (double v : row) sum += v;
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw Error(ErrorCode::RowSumOutOfTolerance,
                    "row " + std::to_string(row_index) + " sums to " + std::to_string(sum));
    }
    if (std::abs(sum - 1.0) <= kRenormSkipTolerance) return;
    for (double& v : row) v /= sum;
}

}  // namespace

ScoreMatrix validate_scores(std::vector<double> flat, std::size_t classes) {
    if (classes < 2) {
        throw Error(ErrorCode::InvalidConfig, "need at least 2 classes, got " + std::to_string(classes));
    }
    if (flat.empty() || flat.size() % classes != 0) {
        throw Error(ErrorCode::NonRectangular,
                    std::to_string(flat.size()) + " values do not form rows of " +
                        std::to_string(classes));
    }
    const std::size_t rows = flat.size() / classes;
    for (std::size_t r = 0; r < rows; ++r) {
        std::span<double> row{flat.data() + r * classes, classes};
        check_row(row, r);
        renormalize_row(row, r);
    }
    return ScoreMatrix(std::move(flat), rows, classes);
}

ScoreMatrix validate_scores(const std::vector<std::vector<double>>& raw) {
    if (raw.empty()) {
        throw Error(ErrorCode::NonRectangular, "empty matrix");
    }
    const std::size_t classes = raw.front().size();
    std::vector<double> flat;
    flat.reserve(raw.size() * classes);
    for (std::size_t r = 0; r < raw.size(); ++r) {
        if (raw[r].size() != classes) {
            throw Error(ErrorCode::NonRectangular,
                        "row " + std::to_string(r) + " has " + std::to_string(raw[r].size()) +
                            " entries, expected " + std::to_string(classes));
        }
        flat.insert(flat.end(), raw[r].begin(), raw[r].end());
    }
    return validate_scores(std::move(flat), classes);
}

std::size_t predicted_label(std::span<const double> row) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
        if (row[c] > row[best]) best = c;
    }
    return best;
}

LabeledScores::LabeledScores(ScoreMatrix scores, std::vector<std::size_t> labels)
    : scores_(std::move(scores)), labels_(std::move(labels)) {
    if (labels_.size() != scores_.rows()) {
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(labels_.size()) + " labels for " +
                        std::to_string(scores_.rows()) + " rows");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] >= scores_.classes()) {
            throw Error(ErrorCode::LabelOutOfRange,
                        "label " + std::to_string(labels_[i]) + " at row " + std::to_string(i) +
                            " >= K=" + std::to_string(scores_.classes()));
        }
    }
}

SampleStack SampleStack::validated(std::vector<std::vector<double>> raw) {
    if (raw.empty()) {
        throw Error(ErrorCode::EmptyStack, "sample stack needs at least one pass");
    }
    return SampleStack(validate_scores(raw));
}

EvidenceVector::EvidenceVector(std::vector<double> evidence)
    : evidence_(std::move(evidence)) {
    strength_ = 0.0;
    for (double e : evidence_) strength_ += e + 1.0;
}

EvidenceVector EvidenceVector::validated(std::vector<double> evidence) {
    if (evidence.size() < 2) {
        throw Error(ErrorCode::InvalidConfig, "evidence vector needs K >= 2 classes");
    }
    for (std::size_t k = 0; k < evidence.size(); ++k) {
        if (!std::isfinite(evidence[k]) || evidence[k] < 0.0) {
            throw Error(ErrorCode::NegativeEvidence,
                        "evidence[" + std::to_string(k) + "] = " + std::to_string(evidence[k]));
        }
    }
    return EvidenceVector(std::move(evidence));
}

}  // namespace uq
