#include "uq/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "uq/parallel.hpp"
#include "uq/rng.hpp"

namespace uq::synth {
namespace {

// Substream salts keep the draws for different purposes disjoint even when
// the same (seed, sample) pair is used.
constexpr std::uint64_t kSaltGenerate = 0x67656e00;
constexpr std::uint64_t kSaltShift = 0x73686600;
constexpr std::uint64_t kSaltStack = 0x73746b00;

}  // namespace

void check_config(const OracleConfig& config) {
    if (config.k_classes < 2) {
        throw Error(ErrorCode::InvalidConfig, "k_classes must be >= 2");
    }
    if (!(config.concentration > 0.0) || !std::isfinite(config.concentration)) {
        throw Error(ErrorCode::InvalidConfig, "concentration must be finite and > 0");
    }
    if (!(config.signal >= 0.0) || !std::isfinite(config.signal)) {
        throw Error(ErrorCode::InvalidConfig, "signal must be finite and >= 0");
    }
}

LabeledScores generate(const OracleConfig& config, std::size_t n, unsigned threads) {
    check_config(config);
    if (n < 1) {
        throw Error(ErrorCode::InvalidConfig, "n must be >= 1");
    }
    const std::size_t k = config.k_classes;
    std::vector<double> flat(n * k);
    std::vector<std::size_t> labels(n);

    parallel_for(n, threads, [&](std::size_t i) {
        Rng rng = Rng::substream(config.seed, kSaltGenerate, i);
        std::span<double> row{flat.data() + i * k, k};
        rng.dirichlet(config.concentration, row);
        const std::size_t label = rng.below(k);
        labels[i] = label;
        row[label] += config.signal;
        double sum = 0.0;
        for (double v : row) sum += v;
        for (double& v : row) v /= sum;
    });
    return LabeledScores(validate_scores(std::move(flat), k), std::move(labels));
}

void check_config(const ShiftConfig& config) {
    if (!(config.temperature > 0.0) || !std::isfinite(config.temperature)) {
        throw Error(ErrorCode::InvalidConfig, "temperature must be finite and > 0");
    }
    if (!(config.label_corruption >= 0.0 && config.label_corruption <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "label_corruption must lie in [0,1]");
    }
}

LabeledScores shift(const LabeledScores& data, const ShiftConfig& config, std::uint64_t seed) {
    check_config(config);
    const std::size_t n = data.size();
    const std::size_t k = data.classes();
    std::vector<double> flat(data.scores().data());
    std::vector<std::size_t> labels(data.labels());

    if (config.temperature != 1.0) {
        const double exponent = 1.0 / config.temperature;
        for (std::size_t i = 0; i < n; ++i) {
            std::span<double> row{flat.data() + i * k, k};
            double sum = 0.0;
            for (double& v : row) {
                v = std::pow(v, exponent);
                sum += v;
            }
            for (double& v : row) v /= sum;
        }
    }
    if (config.label_corruption > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = Rng::substream(seed, kSaltShift, i);
            if (rng.uniform() < config.label_corruption) {
                labels[i] = rng.below(k);
            }
        }
    }
    return LabeledScores(validate_scores(std::move(flat), k), std::move(labels));
}

SampleStack generate_mcd_stack(std::span<const double> row, std::size_t t_passes,
                               double jitter, std::uint64_t seed) {
    if (t_passes < 1) {
        throw Error(ErrorCode::InvalidConfig, "t_passes must be >= 1");
    }
    if (!(jitter >= 0.0) || !std::isfinite(jitter)) {
        throw Error(ErrorCode::InvalidConfig, "jitter must be finite and >= 0");
    }
    const std::size_t k = row.size();
    const ScoreMatrix base = validate_scores({row.data(), row.data() + k}, k);
    const auto p = base.row(0);

    std::vector<std::vector<double>> passes(t_passes);
    for (std::size_t t = 0; t < t_passes; ++t) {
        passes[t].assign(p.begin(), p.end());
        if (jitter == 0.0) continue;
        Rng rng = Rng::substream(seed, kSaltStack, t);
        auto& out = passes[t];
        double max_logit = -std::numeric_limits<double>::infinity();
        for (double& v : out) {
            v = std::log(v) + jitter * rng.normal();
            max_logit = std::max(max_logit, v);
        }
        double sum = 0.0;
        for (double& v : out) {
            v = std::exp(v - max_logit);
            sum += v;
        }
        for (double& v : out) v /= sum;
    }
    return SampleStack::validated(std::move(passes));
}

std::vector<EvidenceVector> generate_evidence(const LabeledScores& data, double scale) {
    if (!(scale >= 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::InvalidConfig, "scale must be finite and >= 0");
    }
    std::vector<EvidenceVector> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = data.scores().row(i);
        std::vector<double> evidence(row.size());
        for (std::size_t c = 0; c < row.size(); ++c) evidence[c] = scale * row[c];
        out.push_back(EvidenceVector::validated(std::move(evidence)));
    }
    return out;
}

}  // namespace uq::synth
