// uqkit: conformal prediction and uncertainty quantification over
// classifier score files. Subcommands: synth, validate, calibrate, predict,
// evaluate, sweep, compare. File formats are described in docs/FORMATS.md.
//
// Exit codes: 0 success, 2 usage error, 3 data/config validation error,
// 4 internal invariant violation.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uq/conformal.hpp"
#include "uq/eval.hpp"
#include "uq/io.hpp"
#include "uq/parallel.hpp"
#include "uq/scores.hpp"
#include "uq/synth.hpp"
#include "uq/text.hpp"

namespace {

using uq::format_double;
using uq::io::RunManifest;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("UQKIT_SEED")) {
        if (const auto parsed = uq::parse_uint(env)) return *parsed;
        throw uq::Error(uq::ErrorCode::InvalidConfig,
                        "UQKIT_SEED is not a non-negative integer: " + std::string(env));
    }
    return 0;
}

uq::LabeledScores load_labeled(const std::string& scores_path, const std::string& labels_path) {
    auto scores = uq::io::decode_scores(uq::io::read_text(scores_path));
    std::size_t k = 0;
    auto labels = uq::io::decode_labels(uq::io::read_text(labels_path), k);
    if (k != scores.classes()) {
        throw uq::Error(uq::ErrorCode::ClassCountMismatch,
                        "scores file has K=" + std::to_string(scores.classes()) +
                            " but labels file declares K=" + std::to_string(k));
    }
    return uq::LabeledScores(std::move(scores), std::move(labels));
}

// One manifest JSON per output file so every result is reproducible on its own.
void emit_manifests(const RunManifest& manifest) {
    const std::string doc = uq::io::manifest_json(manifest);
    for (const auto& out : manifest.output_paths) {
        uq::io::write_text_atomic(out + ".manifest.json", doc);
    }
}

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
    std::vector<double> values;
    for (const auto token : uq::split(csv, ',')) {
        const auto value = uq::parse_double(token);
        if (!value) {
            throw uq::Error(uq::ErrorCode::InvalidConfig,
                            std::string(what) + ": bad number '" + std::string(token) + "'");
        }
        values.push_back(*value);
    }
    return values;
}

std::vector<std::size_t> parse_size_list(const std::string& csv, const char* what) {
    std::vector<std::size_t> values;
    for (const auto token : uq::split(csv, ',')) {
        const auto value = uq::parse_uint(token);
        if (!value) {
            throw uq::Error(uq::ErrorCode::InvalidConfig,
                            std::string(what) + ": bad count '" + std::string(token) + "'");
        }
        values.push_back(static_cast<std::size_t>(*value));
    }
    return values;
}

// ---------------------------------------------------------------- synth ---

struct SynthArgs {
    std::size_t k = 0;
    std::size_t n = 0;
    double concentration = 1.0;
    double signal = 0.0;
    std::optional<std::uint64_t> seed;
    double shift_temperature = 1.0;
    double shift_corruption = 0.0;
    unsigned threads = 1;
    std::string out_scores;
    std::string out_labels;
};

int run_synth(const SynthArgs& args) {
    const std::uint64_t seed = args.seed ? *args.seed : default_seed();
    const uq::synth::OracleConfig config{args.k, args.concentration, args.signal, seed};
    auto data = uq::synth::generate(config, args.n, args.threads);

    const bool shifted = args.shift_temperature != 1.0 || args.shift_corruption != 0.0;
    if (shifted) {
        data = uq::synth::shift(
            data, {args.shift_temperature, args.shift_corruption}, seed + 1);
    }

    RunManifest manifest;
    manifest.command = "synth";
    manifest.seed = seed;
    manifest.parameters = {
        {"k", std::to_string(args.k)},
        {"n", std::to_string(args.n)},
        {"concentration", format_double(args.concentration)},
        {"signal", format_double(args.signal)},
        {"shift_temperature", format_double(args.shift_temperature)},
        {"shift_corruption", format_double(args.shift_corruption)},
    };
    manifest.output_paths = {args.out_scores, args.out_labels};

    uq::io::write_text_atomic(args.out_scores, uq::io::encode_scores(data.scores()));
    uq::io::write_text_atomic(args.out_labels,
                              uq::io::encode_labels(data.labels(), data.classes()));
    emit_manifests(manifest);
    return 0;
}

// ------------------------------------------------------------- validate ---

int run_validate(const std::string& scores_path, const std::string& labels_path) {
    if (labels_path.empty()) {
        const auto scores = uq::io::decode_scores(uq::io::read_text(scores_path));
        std::cout << "ok: " << scores.rows() << " rows, K=" << scores.classes() << "\n";
    } else {
        const auto data = load_labeled(scores_path, labels_path);
        std::cout << "ok: " << data.size() << " labeled rows, K=" << data.classes() << "\n";
    }
    return 0;
}

// ------------------------------------------------------------ calibrate ---

struct CalibrateArgs {
    std::string scores;
    std::string labels;
    double alpha = 0.1;
    std::string variant = "aps";
    double lambda = 0.0;
    int k_reg = 1;
    bool lambda_given = false;
    bool k_reg_given = false;
    std::string out;
};

int run_calibrate(const CalibrateArgs& args) {
    uq::conformal::ScoringConfig config;
    if (args.variant == "aps") {
        config = uq::conformal::ScoringConfig::aps();
    } else if (args.variant == "raps") {
        config = uq::conformal::ScoringConfig::raps(args.lambda, args.k_reg);
    } else {
        throw CLI::ValidationError("--variant must be aps or raps");
    }

    const auto data = load_labeled(args.scores, args.labels);
    const auto calibrator = uq::conformal::calibrate(data, args.alpha, config);

    RunManifest manifest;
    manifest.command = "calibrate";
    manifest.seed = 0;
    manifest.parameters = {
        {"alpha", format_double(args.alpha)},
        {"variant", args.variant},
        {"lambda", format_double(config.lambda)},
        {"k_reg", std::to_string(config.k_reg)},
        {"n_calib", std::to_string(calibrator.n_calib())},
        {"k_classes", std::to_string(calibrator.k_classes())},
        {"quantile_rank", std::to_string(uq::conformal::quantile_rank(data.size(), args.alpha))},
        {"q_hat", format_double(calibrator.q_hat())},
    };
    manifest.input_paths = {args.scores, args.labels};
    manifest.output_paths = {args.out};

    uq::io::write_text_atomic(args.out, uq::conformal::to_record(calibrator));
    emit_manifests(manifest);
    return 0;
}

// -------------------------------------------------------------- predict ---

struct PredictArgs {
    std::string scores;
    std::string calibrator;
    unsigned threads = 1;
    std::string out;
};

int run_predict(const PredictArgs& args) {
    const auto scores = uq::io::decode_scores(uq::io::read_text(args.scores));
    const auto calibrator = uq::conformal::from_record(uq::io::read_text(args.calibrator));

    std::vector<uq::conformal::PredictionSet> sets(scores.rows());
    uq::parallel_for(scores.rows(), args.threads, [&](std::size_t i) {
        sets[i] = uq::conformal::predict_set(scores.row(i), calibrator);
    });

    RunManifest manifest;
    manifest.command = "predict";
    manifest.seed = 0;
    manifest.parameters = {
        {"alpha", format_double(calibrator.alpha())},
        {"q_hat", format_double(calibrator.q_hat())},
        {"n_rows", std::to_string(scores.rows())},
    };
    manifest.input_paths = {args.scores, args.calibrator};
    manifest.output_paths = {args.out};

    uq::io::write_text_atomic(args.out, uq::io::encode_sets(sets, scores.classes()));
    emit_manifests(manifest);
    return 0;
}

// ------------------------------------------------------------- evaluate ---

struct EvaluateArgs {
    std::string sets;
    std::string labels;
    std::string scores;  // optional; supplies argmax predictions
    std::string out;
};

int run_evaluate(const EvaluateArgs& args) {
    std::size_t k_sets = 0;
    const auto sets = uq::io::decode_sets(uq::io::read_text(args.sets), k_sets);
    std::size_t k_labels = 0;
    const auto labels = uq::io::decode_labels(uq::io::read_text(args.labels), k_labels);
    if (k_sets != k_labels) {
        throw uq::Error(uq::ErrorCode::ClassCountMismatch,
                        "sets file K=" + std::to_string(k_sets) + " vs labels K=" +
                            std::to_string(k_labels));
    }
    if (sets.size() != labels.size()) {
        throw uq::Error(uq::ErrorCode::LengthMismatch,
                        std::to_string(sets.size()) + " sets vs " +
                            std::to_string(labels.size()) + " labels");
    }

    // Predicted labels: from the scores file when given; otherwise from the
    // rank-1 member of each non-empty set (identical for predict output).
    std::vector<std::size_t> predicted(sets.size(), 0);
    std::vector<std::uint8_t> empty_mask(sets.size(), 0);
    std::vector<std::uint8_t> unknown_pred(sets.size(), 0);
    if (!args.scores.empty()) {
        const auto scores = uq::io::decode_scores(uq::io::read_text(args.scores));
        if (scores.rows() != sets.size() || scores.classes() != k_sets) {
            throw uq::Error(uq::ErrorCode::LengthMismatch, "scores file shape mismatch");
        }
        for (std::size_t i = 0; i < sets.size(); ++i) {
            predicted[i] = uq::predicted_label(scores.row(i));
        }
    } else {
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (sets[i].k_star > 0) {
                predicted[i] = sets[i].members.front();
            } else {
                unknown_pred[i] = 1;
            }
        }
    }

    std::vector<double> uncertainties(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        uncertainties[i] = sets[i].uncertainty;
        empty_mask[i] = sets[i].k_star == 0 ? 1 : 0;
    }

    const double coverage = uq::eval::empirical_coverage(sets, labels);
    const auto stats = uq::eval::stratify_uncertainty(uncertainties, predicted, labels, empty_mask);

    // Set-size stats need an argmax for every sample; without a scores file
    // the empty sets have none and are excluded from the correct/wrong split.
    uq::eval::SetSizeStats sizes;
    std::size_t sized_empty_excluded = 0;
    if (args.scores.empty()) {
        std::vector<uq::conformal::PredictionSet> known_sets;
        std::vector<std::size_t> known_pred, known_labels;
        double total = 0.0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            total += static_cast<double>(sets[i].k_star);
            if (unknown_pred[i]) {
                ++sized_empty_excluded;
                continue;
            }
            known_sets.push_back(sets[i]);
            known_pred.push_back(predicted[i]);
            known_labels.push_back(labels[i]);
        }
        if (!known_sets.empty()) {
            sizes = uq::eval::set_size_stats(known_sets, known_pred, known_labels);
        }
        sizes.c_average = total / static_cast<double>(sets.size());
    } else {
        sizes = uq::eval::set_size_stats(sets, predicted, labels);
    }

    RunManifest manifest;
    manifest.command = "evaluate";
    manifest.seed = 0;
    manifest.parameters = {
        {"n", std::to_string(sets.size())},
        {"k_classes", std::to_string(k_sets)},
        {"has_scores", args.scores.empty() ? "0" : "1"},
    };
    manifest.input_paths = {args.sets, args.labels};
    if (!args.scores.empty()) manifest.input_paths.push_back(args.scores);
    manifest.output_paths = {args.out};

    const std::vector<std::string> columns{
        "coverage",     "mean_u_correct", "std_u_correct", "mean_u_wrong", "std_u_wrong",
        "n_correct",    "n_wrong",        "excluded_empty", "c_correct",   "c_wrong",
        "c_average",    "size_split_excluded"};
    const std::vector<std::vector<std::string>> rows{{
        format_double(coverage),
        format_double(stats.mean_correct),
        format_double(stats.std_correct),
        format_double(stats.mean_wrong),
        format_double(stats.std_wrong),
        std::to_string(stats.n_correct),
        std::to_string(stats.n_wrong),
        std::to_string(stats.excluded_empty),
        format_double(sizes.c_correct),
        format_double(sizes.c_wrong),
        format_double(sizes.c_average),
        std::to_string(sized_empty_excluded),
    }};
    uq::io::write_text_atomic(args.out, uq::io::result_table(manifest, columns, rows));
    emit_manifests(manifest);
    return 0;
}

// ---------------------------------------------------------------- sweep ---

struct SweepArgs {
    std::string mode;
    std::string cal_scores;
    std::string cal_labels;
    std::string test_scores;
    std::string test_labels;
    std::string pool_scores;
    std::string pool_labels;
    std::string alphas_csv = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95,1";
    std::string sizes_csv = "50,100,250,500,1000";
    std::size_t test_size = 1000;
    std::size_t resamples = 100;
    double alpha = 0.1;
    std::string variant = "aps";
    double lambda = 0.0;
    int k_reg = 1;
    std::optional<std::uint64_t> seed;
    std::string out;
};

uq::conformal::ScoringConfig sweep_config(const SweepArgs& args) {
    if (args.variant == "aps") return uq::conformal::ScoringConfig::aps();
    if (args.variant == "raps") return uq::conformal::ScoringConfig::raps(args.lambda, args.k_reg);
    throw CLI::ValidationError("--variant must be aps or raps");
}

int run_sweep(const SweepArgs& args) {
    const auto config = sweep_config(args);
    RunManifest manifest;
    manifest.command = "sweep";
    manifest.output_paths = {args.out};

    if (args.mode == "alpha") {
        const auto cal = load_labeled(args.cal_scores, args.cal_labels);
        const auto test = load_labeled(args.test_scores, args.test_labels);
        const auto alphas = parse_double_list(args.alphas_csv, "--alphas");
        const auto points = uq::eval::alpha_sweep(cal, test, alphas, config);

        manifest.seed = 0;
        manifest.parameters = {
            {"mode", "alpha"},
            {"alphas", args.alphas_csv},
            {"variant", args.variant},
            {"lambda", format_double(config.lambda)},
            {"k_reg", std::to_string(config.k_reg)},
        };
        manifest.input_paths = {args.cal_scores, args.cal_labels, args.test_scores,
                                args.test_labels};

        std::vector<std::vector<std::string>> rows;
        for (const auto& point : points) {
            rows.push_back({format_double(point.alpha), std::to_string(point.certain),
                            std::to_string(point.uncertain), std::to_string(point.empty)});
        }
        uq::io::write_text_atomic(
            args.out,
            uq::io::result_table(manifest, {"alpha", "certain", "uncertain", "empty"}, rows));
        emit_manifests(manifest);
        return 0;
    }

    if (args.mode == "calibsize") {
        const auto pool = load_labeled(args.pool_scores, args.pool_labels);
        const auto sizes = parse_size_list(args.sizes_csv, "--sizes");
        const std::uint64_t seed = args.seed ? *args.seed : default_seed();
        const auto points = uq::eval::calibration_size_sweep(
            pool, sizes, args.test_size, args.resamples, args.alpha, config, seed);

        manifest.seed = seed;
        manifest.parameters = {
            {"mode", "calibsize"},
            {"sizes", args.sizes_csv},
            {"test_size", std::to_string(args.test_size)},
            {"resamples", std::to_string(args.resamples)},
            {"alpha", format_double(args.alpha)},
            {"variant", args.variant},
            {"lambda", format_double(config.lambda)},
            {"k_reg", std::to_string(config.k_reg)},
        };
        manifest.input_paths = {args.pool_scores, args.pool_labels};

        std::vector<std::vector<std::string>> rows;
        for (const auto& point : points) {
            rows.push_back({std::to_string(point.calib_size),
                            format_double(point.mean_coverage),
                            format_double(point.std_coverage)});
        }
        uq::io::write_text_atomic(
            args.out,
            uq::io::result_table(manifest, {"calib_size", "mean_coverage", "std_coverage"},
                                 rows));
        emit_manifests(manifest);
        return 0;
    }

    throw CLI::ValidationError("--mode must be alpha or calibsize");
}

// -------------------------------------------------------------- compare ---

struct CompareArgs {
    std::string scores;
    std::string labels;
    std::string calibrator;
    std::size_t mcd_passes = 100;
    double mcd_jitter = 0.1;
    double evidence_scale = 10.0;
    std::size_t bins = 10;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out;
    std::string hist_out;
};

int run_compare(const CompareArgs& args) {
    const auto data = load_labeled(args.scores, args.labels);
    const auto calibrator = uq::conformal::from_record(uq::io::read_text(args.calibrator));
    const std::uint64_t seed = args.seed ? *args.seed : default_seed();

    std::vector<uq::SampleStack> stacks;
    stacks.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        stacks.push_back(uq::synth::generate_mcd_stack(
            data.scores().row(i), args.mcd_passes, args.mcd_jitter,
            uq::mix64(seed ^ i)));
    }
    const auto evidence = uq::synth::generate_evidence(data, args.evidence_scale);
    const auto result = uq::eval::compare_methods(data, stacks, evidence, calibrator);

    RunManifest manifest;
    manifest.command = "compare";
    manifest.seed = seed;
    manifest.parameters = {
        {"mcd_passes", std::to_string(args.mcd_passes)},
        {"mcd_jitter", format_double(args.mcd_jitter)},
        {"evidence_scale", format_double(args.evidence_scale)},
        {"bins", std::to_string(args.bins)},
        {"n", std::to_string(data.size())},
    };
    manifest.input_paths = {args.scores, args.labels, args.calibrator};
    manifest.output_paths = {args.out};
    if (!args.hist_out.empty()) manifest.output_paths.push_back(args.hist_out);

    auto stats_row = [](const char* method, const uq::eval::StratifiedStats& stats) {
        return std::vector<std::string>{
            method,
            format_double(stats.mean_correct),
            format_double(stats.std_correct),
            format_double(stats.mean_wrong),
            format_double(stats.std_wrong),
            std::to_string(stats.n_correct),
            std::to_string(stats.n_wrong),
            std::to_string(stats.excluded_empty),
        };
    };
    const std::vector<std::string> columns{"method",       "mean_u_correct", "std_u_correct",
                                           "mean_u_wrong", "std_u_wrong",    "n_correct",
                                           "n_wrong",      "excluded_empty"};
    uq::io::write_text_atomic(args.out,
                              uq::io::result_table(manifest, columns,
                                                   {stats_row("cp", result.cp),
                                                    stats_row("mcd", result.mcd),
                                                    stats_row("edl", result.edl)}));

    if (!args.hist_out.empty()) {
        // MCD variance lives in [0, 0.25]; histogram() wants [0,1], so bin 4x.
        std::vector<double> cp_correct, cp_wrong, mcd_correct, mcd_wrong, edl_correct, edl_wrong;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto& triple = result.per_sample[i];
            const auto row = data.scores().row(i);
            if (!triple.cp_empty) {
                (uq::predicted_label(row) == data.labels()[i] ? cp_correct : cp_wrong)
                    .push_back(triple.cp_uncertainty);
            }
            const auto mcd = uq::baselines::mcd_summarize(stacks[i]);
            (mcd.predicted == data.labels()[i] ? mcd_correct : mcd_wrong)
                .push_back(4.0 * triple.mcd_uncertainty);
            const auto edl = uq::baselines::edl_summarize(evidence[i]);
            (edl.predicted == data.labels()[i] ? edl_correct : edl_wrong)
                .push_back(triple.edl_uncertainty);
        }
        std::vector<std::vector<std::string>> rows;
        auto add_rows = [&](const char* method, const char* group,
                            const std::vector<double>& values) {
            const auto counts = uq::eval::histogram(values, args.bins);
            for (std::size_t b = 0; b < counts.size(); ++b) {
                const double lo = static_cast<double>(b) / static_cast<double>(args.bins);
                const double hi = static_cast<double>(b + 1) / static_cast<double>(args.bins);
                rows.push_back({method, group, format_double(lo), format_double(hi),
                                std::to_string(counts[b])});
            }
        };
        add_rows("cp", "correct", cp_correct);
        add_rows("cp", "wrong", cp_wrong);
        add_rows("mcd", "correct", mcd_correct);
        add_rows("mcd", "wrong", mcd_wrong);
        add_rows("edl", "correct", edl_correct);
        add_rows("edl", "wrong", edl_wrong);
        uq::io::write_text_atomic(
            args.hist_out,
            uq::io::result_table(manifest, {"method", "group", "bin_lo", "bin_hi", "count"},
                                 rows));
    }
    emit_manifests(manifest);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conformal prediction and uncertainty quantification toolkit"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate labeled synthetic score files");
    synth_cmd->add_option("--k", synth.k, "number of classes (>= 2)")->required();
    synth_cmd->add_option("--n", synth.n, "number of samples")->required();
    synth_cmd->add_option("--concentration", synth.concentration,
                          "Dirichlet concentration (> 0)");
    synth_cmd->add_option("--signal", synth.signal, "true-class boost (>= 0)");
    synth_cmd->add_option("--seed", synth.seed, "master seed (default: $UQKIT_SEED or 0)");
    synth_cmd->add_option("--shift-temperature", synth.shift_temperature,
                          "score-space covariate shift temperature");
    synth_cmd->add_option("--shift-corruption", synth.shift_corruption,
                          "label corruption probability");
    synth_cmd->add_option("--threads", synth.threads, "worker threads");
    synth_cmd->add_option("--out-scores", synth.out_scores, "output scores file")->required();
    synth_cmd->add_option("--out-labels", synth.out_labels, "output labels file")->required();

    std::string validate_scores_path, validate_labels_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a scores (and labels) file");
    validate_cmd->add_option("--scores", validate_scores_path, "scores file")->required();
    validate_cmd->add_option("--labels", validate_labels_path, "labels file");

    CalibrateArgs calibrate;
    auto* calibrate_cmd = app.add_subcommand("calibrate", "fit a conformal calibrator");
    calibrate_cmd->add_option("--scores", calibrate.scores, "calibration scores file")
        ->required();
    calibrate_cmd->add_option("--labels", calibrate.labels, "calibration labels file")
        ->required();
    calibrate_cmd->add_option("--alpha", calibrate.alpha, "error rate in [0,1]")->required();
    calibrate_cmd->add_option("--variant", calibrate.variant, "aps or raps");
    auto* lambda_opt =
        calibrate_cmd->add_option("--lambda", calibrate.lambda, "RAPS rank penalty (>= 0)");
    auto* k_reg_opt =
        calibrate_cmd->add_option("--k-reg", calibrate.k_reg, "RAPS free ranks (>= 1)");
    calibrate_cmd->add_option("--out", calibrate.out, "output calibrator file")->required();

    PredictArgs predict;
    auto* predict_cmd = app.add_subcommand("predict", "emit prediction sets for a scores file");
    predict_cmd->add_option("--scores", predict.scores, "test scores file")->required();
    predict_cmd->add_option("--calibrator", predict.calibrator, "calibrator file")->required();
    predict_cmd->add_option("--threads", predict.threads, "worker threads");
    predict_cmd->add_option("--out", predict.out, "output prediction-sets file")->required();

    EvaluateArgs evaluate;
    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "coverage and stratified statistics for prediction sets");
    evaluate_cmd->add_option("--sets", evaluate.sets, "prediction-sets file")->required();
    evaluate_cmd->add_option("--labels", evaluate.labels, "true labels file")->required();
    evaluate_cmd->add_option("--scores", evaluate.scores,
                             "scores file (optional; supplies argmax predictions)");
    evaluate_cmd->add_option("--out", evaluate.out, "output result table")->required();

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "alpha sweep or calibration-size sweep");
    sweep_cmd->add_option("--mode", sweep.mode, "alpha or calibsize")->required();
    sweep_cmd->add_option("--cal-scores", sweep.cal_scores, "calibration scores (alpha mode)");
    sweep_cmd->add_option("--cal-labels", sweep.cal_labels, "calibration labels (alpha mode)");
    sweep_cmd->add_option("--test-scores", sweep.test_scores, "test scores (alpha mode)");
    sweep_cmd->add_option("--test-labels", sweep.test_labels, "test labels (alpha mode)");
    sweep_cmd->add_option("--pool-scores", sweep.pool_scores, "pool scores (calibsize mode)");
    sweep_cmd->add_option("--pool-labels", sweep.pool_labels, "pool labels (calibsize mode)");
    sweep_cmd->add_option("--alphas", sweep.alphas_csv, "comma list of alphas (alpha mode)");
    sweep_cmd->add_option("--sizes", sweep.sizes_csv, "comma list of sizes (calibsize mode)");
    sweep_cmd->add_option("--test-size", sweep.test_size, "held-out test size (calibsize mode)");
    sweep_cmd->add_option("--resamples", sweep.resamples, "resamples per size (calibsize mode)");
    sweep_cmd->add_option("--alpha", sweep.alpha, "error rate (calibsize mode)");
    sweep_cmd->add_option("--variant", sweep.variant, "aps or raps");
    sweep_cmd->add_option("--lambda", sweep.lambda, "RAPS rank penalty");
    sweep_cmd->add_option("--k-reg", sweep.k_reg, "RAPS free ranks");
    sweep_cmd->add_option("--seed", sweep.seed, "master seed (default: $UQKIT_SEED or 0)");
    sweep_cmd->add_option("--out", sweep.out, "output result table")->required();

    CompareArgs compare;
    auto* compare_cmd =
        app.add_subcommand("compare", "run CP, MCD, and EDL over the same samples");
    compare_cmd->add_option("--scores", compare.scores, "scores file")->required();
    compare_cmd->add_option("--labels", compare.labels, "labels file")->required();
    compare_cmd->add_option("--calibrator", compare.calibrator, "calibrator file")->required();
    compare_cmd->add_option("--mcd-passes", compare.mcd_passes, "stochastic passes per sample");
    compare_cmd->add_option("--mcd-jitter", compare.mcd_jitter, "log-space jitter sigma");
    compare_cmd->add_option("--evidence-scale", compare.evidence_scale, "EDL evidence scale");
    compare_cmd->add_option("--bins", compare.bins, "histogram bins");
    compare_cmd->add_option("--seed", compare.seed, "master seed (default: $UQKIT_SEED or 0)");
    compare_cmd->add_option("--threads", compare.threads, "worker threads");
    compare_cmd->add_option("--out", compare.out, "output comparison table")->required();
    compare_cmd->add_option("--hist-out", compare.hist_out, "optional histogram table");

    try {
        app.parse(argc, argv);

        if (calibrate_cmd->parsed() && calibrate.variant == "aps" &&
            (lambda_opt->count() > 0 || k_reg_opt->count() > 0)) {
            std::cerr << "usage error: --lambda/--k-reg apply only to --variant raps\n";
            return kExitUsage;
        }
        calibrate.lambda_given = lambda_opt->count() > 0;
        calibrate.k_reg_given = k_reg_opt->count() > 0;

        if (synth_cmd->parsed()) return run_synth(synth);
        if (validate_cmd->parsed()) return run_validate(validate_scores_path, validate_labels_path);
        if (calibrate_cmd->parsed()) return run_calibrate(calibrate);
        if (predict_cmd->parsed()) return run_predict(predict);
        if (evaluate_cmd->parsed()) return run_evaluate(evaluate);
        if (sweep_cmd->parsed()) return run_sweep(sweep);
        if (compare_cmd->parsed()) return run_compare(compare);
        std::cerr << "usage error: no subcommand\n";
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    } catch (const uq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == uq::ErrorCode::Internal ? kExitInternal : kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
