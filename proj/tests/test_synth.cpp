#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "uq/baselines.hpp"
#include "uq/conformal.hpp"
#include "uq/eval.hpp"
#include "uq/synth.hpp"

using namespace uq::synth;
using uq::Error;
using uq::ErrorCode;
using uq::LabeledScores;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Internal;
}

double argmax_accuracy(const LabeledScores& data) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (uq::predicted_label(data.scores().row(i)) == data.labels()[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace

TEST_CASE("generation is bitwise deterministic for a fixed config") {
    const OracleConfig config{.k_classes = 7, .concentration = 0.8, .signal = 1.0, .seed = 42};
    const auto a = generate(config, 500);
    const auto b = generate(config, 500);
    CHECK(a.scores().data() == b.scores().data());
    CHECK(a.labels() == b.labels());

    // a longer run extends, not reshuffles, the shorter one
    const auto c = generate(config, 600);
    for (std::size_t i = 0; i < 500 * 7; ++i) {
        CHECK(c.scores().data()[i] == a.scores().data()[i]);
    }
}

TEST_CASE("huge signal approaches the one-hot limit") {
    const auto data = generate({.k_classes = 7, .concentration = 1.0, .signal = 1e9, .seed = 3},
                               300);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(data.scores().row(i)[data.labels()[i]] > 0.999999);
        if (uq::predicted_label(data.scores().row(i)) == data.labels()[i]) ++correct;
    }
    CHECK(correct == data.size());
}

TEST_CASE("fully degenerate oracle calibrates to total coverage") {
    // at signal 1e17 the float limit is reached: true-label probability is
    // exactly 1.0, every calibration score is 1.0, q_hat is 1.0, and the
    // cumulative walk absorbs the ~1e-18 tail probabilities into full sets
    const auto data = generate({.k_classes = 7, .concentration = 1.0, .signal = 1e17, .seed = 3},
                               300);
    const auto calibrator =
        uq::conformal::calibrate(data, 0.1, uq::conformal::ScoringConfig::aps());
    CHECK(calibrator.q_hat() == 1.0);
    const auto test = generate({.k_classes = 7, .concentration = 1.0, .signal = 1e17, .seed = 4},
                               300);
    std::vector<uq::conformal::PredictionSet> sets;
    for (std::size_t i = 0; i < test.size(); ++i) {
        CHECK(test.scores().row(i)[test.labels()[i]] == 1.0);
        sets.push_back(uq::conformal::predict_set(test.scores().row(i), calibrator));
    }
    CHECK(uq::eval::empirical_coverage(sets, test.labels()) == 1.0);
}

TEST_CASE("zero signal sits at chance accuracy") {
    const std::size_t n = 20000;
    const auto data = generate({.k_classes = 5, .concentration = 1.0, .signal = 0.0, .seed = 9}, n);
    const double p = 1.0 / 5.0;
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    CHECK(std::abs(argmax_accuracy(data) - p) <= 3.0 * sigma);
}

TEST_CASE("accuracy is monotone in signal over a grid") {
    const std::size_t n = 8000;
    double previous = -1.0;
    for (double signal : {0.0, 0.3, 0.8, 1.5, 3.0, 8.0}) {
        const auto data = generate(
            {.k_classes = 7, .concentration = 1.0, .signal = signal, .seed = 77}, n);
        const double acc = argmax_accuracy(data);
        CHECK(acc >= previous - 0.01);  // slack for Monte Carlo noise
        previous = acc;
    }
    CHECK(previous > 0.95);  // signal 8 on concentration 1 is nearly clean
}

TEST_CASE("all generated rows pass score validation invariants") {
    const auto data = generate({.k_classes = 4, .concentration = 0.5, .signal = 0.7, .seed = 5},
                               1000);
    for (std::size_t i = 0; i < data.size(); ++i) {
        double sum = 0.0;
        for (double v : data.scores().row(i)) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-6);
    }
}

TEST_CASE("oracle config validation") {
    CHECK(code_of([] { generate({.k_classes = 1}, 10); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([] { generate({.k_classes = 3, .concentration = 0.0}, 10); }) ==
          ErrorCode::InvalidConfig);
    CHECK(code_of([] { generate({.k_classes = 3, .concentration = 1.0, .signal = -1.0}, 10); }) ==
          ErrorCode::InvalidConfig);
    CHECK(code_of([] { generate({.k_classes = 3}, 0); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("temperature one with no corruption is the identity transform") {
    const auto data = generate({.k_classes = 6, .concentration = 0.9, .signal = 1.1, .seed = 21},
                               200);
    const auto shifted = shift(data, {.temperature = 1.0, .label_corruption = 0.0}, 99);
    CHECK(shifted.scores().data() == data.scores().data());
    CHECK(shifted.labels() == data.labels());
}

TEST_CASE("extreme temperature flattens rows toward uniform") {
    const auto data = generate({.k_classes = 5, .concentration = 0.4, .signal = 2.0, .seed = 22},
                               200);
    const auto flat = shift(data, {.temperature = 1e9, .label_corruption = 0.0}, 0);
    for (std::size_t i = 0; i < flat.size(); ++i) {
        for (double v : flat.scores().row(i)) {
            CHECK(v == doctest::Approx(0.2).epsilon(1e-6));
        }
    }
    // under any finite q_hat < 1 the APS walk now includes everything it can
    const uq::conformal::Calibrator calibrator(0.1, uq::conformal::ScoringConfig::aps(), 0.99,
                                               100, 5);
    const auto set = uq::conformal::predict_set(flat.scores().row(0), calibrator);
    CHECK(set.k_star == 4);  // 5th rank closes the sum at ~1.0 > 0.99
}

TEST_CASE("temperature-3 shift on a sharp oracle inflates set sizes (paired)") {
    const auto calib = generate({.k_classes = 7, .concentration = 0.5, .signal = 2.0, .seed = 30},
                                1000);
    const auto calibrator =
        uq::conformal::calibrate(calib, 0.1, uq::conformal::ScoringConfig::aps());
    const auto test = generate({.k_classes = 7, .concentration = 0.5, .signal = 2.0, .seed = 31},
                               1000);
    const auto shifted = shift(test, {.temperature = 3.0, .label_corruption = 0.0}, 0);
    double base_mean = 0.0;
    double shifted_mean = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        base_mean += uq::conformal::predict_set(test.scores().row(i), calibrator).uncertainty;
        shifted_mean +=
            uq::conformal::predict_set(shifted.scores().row(i), calibrator).uncertainty;
    }
    CHECK(shifted_mean > base_mean);
}

TEST_CASE("label corruption resamples deterministically") {
    const auto data = generate({.k_classes = 4, .concentration = 1.0, .signal = 1.0, .seed = 50},
                               2000);
    const ShiftConfig config{.temperature = 1.0, .label_corruption = 0.5};
    const auto a = shift(data, config, 1234);
    const auto b = shift(data, config, 1234);
    CHECK(a.labels() == b.labels());
    CHECK(a.scores().data() == data.scores().data());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (a.labels()[i] != data.labels()[i]) ++changed;
    }
    // half get resampled, of which 3/4 land on a different label: ~37.5%
    CHECK(changed > 600);
    CHECK(changed < 900);

    CHECK(code_of([&] { shift(data, {.temperature = 0.0}, 0); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([&] { shift(data, {.temperature = 1.0, .label_corruption = 1.5}, 0); }) ==
          ErrorCode::InvalidConfig);
}

TEST_CASE("mcd stack with zero jitter repeats the row exactly") {
    const std::vector<double> row{0.6, 0.3, 0.1};
    const auto stack = generate_mcd_stack(row, 8, 0.0, 7);
    CHECK(stack.passes() == 8);
    const auto summary = uq::baselines::mcd_summarize(stack);
    CHECK(summary.variance == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(summary.uncertainty == 0.0);
}

TEST_CASE("mcd stack with jitter varies and is seed-deterministic") {
    const std::vector<double> row{0.6, 0.3, 0.1};
    const auto a = generate_mcd_stack(row, 64, 0.3, 11);
    const auto b = generate_mcd_stack(row, 64, 0.3, 11);
    for (std::size_t t = 0; t < a.passes(); ++t) {
        const auto pa = a.pass(t);
        const auto pb = b.pass(t);
        CHECK(std::equal(pa.begin(), pa.end(), pb.begin()));
    }
    const auto summary = uq::baselines::mcd_summarize(a);
    double total_variance = 0.0;
    for (double v : summary.variance) total_variance += v;
    CHECK(total_variance > 0.0);

    CHECK(code_of([&] { generate_mcd_stack(row, 0, 0.1, 1); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([&] { generate_mcd_stack(row, 4, -0.1, 1); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("evidence scale endpoints and monotonicity") {
    const auto data = generate({.k_classes = 3, .concentration = 1.0, .signal = 1.0, .seed = 60},
                               50);

    const auto zero = generate_evidence(data, 0.0);
    for (const auto& e : zero) {
        CHECK(uq::baselines::edl_summarize(e).uncertainty == 1.0);
    }

    // scale = K * c gives S = K(c+1) and u = 1/(c+1) because rows sum to 1
    const double c = 4.0;
    const auto scaled = generate_evidence(data, 3.0 * c);
    for (const auto& e : scaled) {
        CHECK(uq::baselines::edl_summarize(e).uncertainty ==
              doctest::Approx(1.0 / (c + 1.0)).epsilon(1e-9));
    }

    double previous = 2.0;
    for (double scale : {0.0, 1.0, 5.0, 25.0, 125.0}) {
        const auto evidence = generate_evidence(data, scale);
        const double u = uq::baselines::edl_summarize(evidence[0]).uncertainty;
        const bool decreasing = u < previous;
        CHECK(decreasing);
        previous = u;
    }

    CHECK(code_of([&] { generate_evidence(data, -1.0); }) == ErrorCode::InvalidConfig);
}
