#include "uq/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "uq/text.hpp"

namespace uq::conformal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Guards the quantile rank against (1+N)(1-alpha) landing one ulp above an
// exact integer.
constexpr double kRankEps = 1e-9;
}  // namespace

void check_config(const ScoringConfig& config) {
    if (config.variant == Variant::Raps) {
        if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda)) {
            throw Error(ErrorCode::InvalidConfig, "lambda must be finite and >= 0");
        }
        if (config.k_reg < 1) {
            throw Error(ErrorCode::InvalidConfig, "k_reg must be >= 1");
        }
    }
}

std::vector<std::size_t> descending_order(std::span<const double> row) {
    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (row[a] != row[b]) return row[a] > row[b];
        return a < b;
    });
    return order;
}

double raps_score(std::span<const double> row, std::size_t label, double lambda, int k_reg) {
    if (label >= row.size()) {
        throw Error(ErrorCode::LabelOutOfRange,
                    "label " + std::to_string(label) + " >= K=" + std::to_string(row.size()));
    }
    const auto order = descending_order(row);
    double cumulative = 0.0;
    for (std::size_t rank = 1; rank <= order.size(); ++rank) {
        cumulative += row[order[rank - 1]];
        if (rank > static_cast<std::size_t>(k_reg)) cumulative += lambda;
        if (order[rank - 1] == label) return cumulative;
    }
    throw Error(ErrorCode::Internal, "label not found in rank order");
}

double aps_score(std::span<const double> row, std::size_t label) {
    return raps_score(row, label, 0.0, 1);
}

double nonconformity_score(const ScoringConfig& config, std::span<const double> row,
                           std::size_t label) {
    if (config.variant == Variant::Aps) return aps_score(row, label);
    return raps_score(row, label, config.lambda, config.k_reg);
}

std::size_t quantile_rank(std::size_t n, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidAlpha, "alpha must lie in [0,1]");
    }
    const double rank = std::ceil((1.0 + static_cast<double>(n)) * (1.0 - alpha) - kRankEps);
    return rank <= 0.0 ? 0 : static_cast<std::size_t>(rank);
}

double conformal_quantile(std::vector<double> calibration_scores, double alpha) {
    if (calibration_scores.empty()) {
        throw Error(ErrorCode::EmptyCalibration, "no calibration scores");
    }
    const std::size_t n = calibration_scores.size();
    const std::size_t k = quantile_rank(n, alpha);
    if (k == 0) return 0.0;
    if (k > n) return kInf;
    std::nth_element(calibration_scores.begin(), calibration_scores.begin() + (k - 1),
                     calibration_scores.end());
    return calibration_scores[k - 1];
}

Calibrator::Calibrator(double alpha, ScoringConfig config, double q_hat, std::size_t n_calib,
                       std::size_t k_classes)
    : alpha_(alpha), config_(config), q_hat_(q_hat), n_calib_(n_calib), k_classes_(k_classes) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidAlpha, "alpha must lie in [0,1]");
    }
    check_config(config_);
    if (!(q_hat_ >= 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "q_hat must be >= 0 or +inf");
    }
    if (n_calib_ < 1) {
        throw Error(ErrorCode::EmptyCalibration, "calibration size must be >= 1");
    }
    if (k_classes_ < 2) {
        throw Error(ErrorCode::InvalidConfig, "k_classes must be >= 2");
    }
}

Calibrator calibrate(const LabeledScores& calibration, double alpha,
                     const ScoringConfig& config) {
    check_config(config);
    const std::size_t n = calibration.size();
    if (n == 0) {
        throw Error(ErrorCode::EmptyCalibration, "calibration set is empty");
    }
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = nonconformity_score(config, calibration.scores().row(i),
                                        calibration.labels()[i]);
    }
    const double q_hat = conformal_quantile(std::move(scores), alpha);
    return Calibrator(alpha, config, q_hat, n, calibration.classes());
}

PredictionSet predict_set(std::span<const double> row, const Calibrator& calibrator) {
    if (row.size() != calibrator.k_classes()) {
        throw Error(ErrorCode::ClassCountMismatch,
                    "row has " + std::to_string(row.size()) + " classes, calibrator expects " +
                        std::to_string(calibrator.k_classes()));
    }
    const auto order = descending_order(row);
    const ScoringConfig& config = calibrator.config();
    const bool regularized = config.variant == Variant::Raps;

    PredictionSet set;
    double cumulative = 0.0;
    for (std::size_t rank = 1; rank <= order.size(); ++rank) {
        cumulative += row[order[rank - 1]];
        if (regularized && rank > static_cast<std::size_t>(config.k_reg)) {
            cumulative += config.lambda;
        }
        if (!(cumulative <= calibrator.q_hat())) break;
        set.members.push_back(order[rank - 1]);
    }
    set.k_star = set.members.size();
    set.uncertainty = set_uncertainty(static_cast<double>(set.k_star), row.size());
    return set;
}

double set_uncertainty(double k_star, std::size_t k_classes) {
    return k_star / static_cast<double>(k_classes);
}

CoverageBound coverage_bound(double alpha, std::size_t n_calib) {
    return {1.0 - alpha, 1.0 - alpha + 1.0 / (1.0 + static_cast<double>(n_calib))};
}

std::string to_record(const Calibrator& calibrator) {
    const ScoringConfig& config = calibrator.config();
    std::string out;
    out += "version=1\n";
    out += "variant=";
    out += config.variant == Variant::Aps ? "aps" : "raps";
    out += "\n";
    out += "alpha=" + format_double(calibrator.alpha()) + "\n";
    out += "lambda=" + format_double(config.lambda) + "\n";
    out += "k_reg=" + std::to_string(config.k_reg) + "\n";
    out += "q_hat=" + format_double(calibrator.q_hat()) + "\n";
    out += "n_calib=" + std::to_string(calibrator.n_calib()) + "\n";
    out += "k_classes=" + std::to_string(calibrator.k_classes()) + "\n";
    return out;
}

Calibrator from_record(const std::string& text) {
    std::map<std::string, std::string, std::less<>> fields;
    for (std::string_view line : split(text, '\n')) {
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::CorruptRecord, "malformed line: " + std::string(line));
        }
        const auto [it, inserted] =
            fields.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
        if (!inserted) {
            throw Error(ErrorCode::CorruptRecord, "duplicate key: " + it->first);
        }
    }

    auto take = [&](const char* key) -> std::string {
        auto it = fields.find(key);
        if (it == fields.end()) {
            throw Error(ErrorCode::CorruptRecord, std::string("missing key: ") + key);
        }
        std::string value = it->second;
        fields.erase(it);
        return value;
    };

    const std::string version = take("version");
    if (version != "1") {
        throw Error(ErrorCode::VersionMismatch, "unsupported record version: " + version);
    }

    const std::string variant_name = take("variant");
    ScoringConfig config;
    if (variant_name == "aps") {
        config.variant = Variant::Aps;
    } else if (variant_name == "raps") {
        config.variant = Variant::Raps;
    } else {
        throw Error(ErrorCode::CorruptRecord, "unknown variant: " + variant_name);
    }

    const auto alpha = parse_double(take("alpha"));
    const auto lambda = parse_double(take("lambda"));
    const auto k_reg = parse_uint(take("k_reg"));
    const auto q_hat = parse_double(take("q_hat"));
    const auto n_calib = parse_uint(take("n_calib"));
    const auto k_classes = parse_uint(take("k_classes"));
    if (!fields.empty()) {
        throw Error(ErrorCode::CorruptRecord, "unknown key: " + fields.begin()->first);
    }
    if (!alpha || !lambda || !k_reg || !q_hat || !n_calib || !k_classes) {
        throw Error(ErrorCode::CorruptRecord, "unparseable numeric field");
    }
    if (!(*alpha >= 0.0 && *alpha <= 1.0) || *lambda < 0.0 || !std::isfinite(*lambda) ||
        *k_reg < 1 || *k_reg > static_cast<std::uint64_t>(std::numeric_limits<int>::max()) ||
        !(*q_hat >= 0.0) || *n_calib < 1 || *k_classes < 2) {
        throw Error(ErrorCode::CorruptRecord, "field value out of range");
    }

    config.lambda = *lambda;
    config.k_reg = static_cast<int>(*k_reg);
    return Calibrator(*alpha, config, *q_hat, static_cast<std::size_t>(*n_calib),
                      static_cast<std::size_t>(*k_classes));
}

}  // namespace uq::conformal
