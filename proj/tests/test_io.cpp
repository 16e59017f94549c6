#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <functional>
#include <vector>

#include "uq/io.hpp"
#include "uq/rng.hpp"
#include "uq/synth.hpp"
#include "uq/text.hpp"

using namespace uq::io;
using uq::Error;
using uq::ErrorCode;

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

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "uqkit-io-test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
    uq::Rng rng(900);
    for (int i = 0; i < 2000; ++i) {
        const double x = (rng.uniform() - 0.25) * std::pow(10.0, rng.uniform() * 20.0 - 10.0);
        const auto parsed = uq::parse_double(uq::format_double(x));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == x);
    }
    CHECK(uq::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(!uq::parse_double("1.5x").has_value());
    CHECK(!uq::parse_double("").has_value());
    CHECK(!uq::parse_uint("-3").has_value());
}

TEST_CASE("scores file round-trips bit-exactly") {
    const auto data = uq::synth::generate(
        {.k_classes = 7, .concentration = 0.6, .signal = 1.0, .seed = 901}, 150);
    const auto text = encode_scores(data.scores());
    const auto decoded = decode_scores(text);
    CHECK(decoded.rows() == data.scores().rows());
    CHECK(decoded.classes() == 7);
    CHECK(decoded.data() == data.scores().data());
    // a second emit is byte-identical
    CHECK(encode_scores(decoded) == text);
}

TEST_CASE("labels file round-trips and validates") {
    const std::vector<std::size_t> labels{0, 3, 6, 2, 2, 5};
    const auto text = encode_labels(labels, 7);
    std::size_t k = 0;
    CHECK(decode_labels(text, k) == labels);
    CHECK(k == 7);

    CHECK(code_of([] {
              std::size_t kk;
              decode_labels("k=3\n5\n", kk);
          }) == ErrorCode::LabelOutOfRange);
    CHECK(code_of([] {
              std::size_t kk;
              decode_labels("k=3\nx\n", kk);
          }) == ErrorCode::CorruptRecord);
    CHECK(code_of([] {
              std::size_t kk;
              decode_labels("labels\n1\n", kk);
          }) == ErrorCode::CorruptRecord);
}

TEST_CASE("prediction sets file round-trips including empties") {
    std::vector<uq::conformal::PredictionSet> sets(3);
    sets[0].members = {4, 1};
    sets[0].k_star = 2;
    sets[0].uncertainty = uq::conformal::set_uncertainty(2, 7);
    sets[1].members = {};
    sets[1].k_star = 0;
    sets[1].uncertainty = 0.0;
    sets[2].members = {0, 2, 6};
    sets[2].k_star = 3;
    sets[2].uncertainty = uq::conformal::set_uncertainty(3, 7);

    const auto text = encode_sets(sets, 7);
    std::size_t k = 0;
    const auto decoded = decode_sets(text, k);
    CHECK(k == 7);
    REQUIRE(decoded.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(decoded[i].members == sets[i].members);
        CHECK(decoded[i].k_star == sets[i].k_star);
        CHECK(decoded[i].uncertainty == sets[i].uncertainty);
    }

    CHECK(code_of([] {
              std::size_t kk;
              decode_sets("k=3\n2 0.5 1\n", kk);  // member count != k_star
          }) == ErrorCode::CorruptRecord);
    CHECK(code_of([] {
              std::size_t kk;
              decode_sets("k=3\n1 0.5 1\n", kk);  // uncertainty != 1/3
          }) == ErrorCode::CorruptRecord);
}

TEST_CASE("decode_scores rejects structural corruption") {
    CHECK(code_of([] { decode_scores("k=3\n0.5 0.5\n"); }) == ErrorCode::CorruptRecord);
    CHECK(code_of([] { decode_scores("k=3\n"); }) == ErrorCode::CorruptRecord);
    CHECK(code_of([] { decode_scores("nonsense\n0.5 0.5\n"); }) == ErrorCode::CorruptRecord);
    CHECK(code_of([] { decode_scores("k=1\n1.0\n"); }) == ErrorCode::CorruptRecord);
    CHECK(code_of([] { decode_scores("k=2\n0.5 abc\n"); }) == ErrorCode::CorruptRecord);
    // numeric validation still comes from validate_scores
    CHECK(code_of([] { decode_scores("k=2\n0.9 0.3\n"); }) == ErrorCode::RowSumOutOfTolerance);
}

TEST_CASE("atomic writes land complete and leave no temp files") {
    const auto dir = temp_dir();
    const auto path = dir / "atomic.txt";
    write_text_atomic(path, "first\n");
    CHECK(read_text(path) == "first\n");
    write_text_atomic(path, "second\n");
    CHECK(read_text(path) == "second\n");

    std::size_t leftovers = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().filename().string().find(".tmp") != std::string::npos) ++leftovers;
    }
    CHECK(leftovers == 0);
    std::filesystem::remove_all(dir);

    CHECK(code_of([] { read_text("/nonexistent/uqkit/file"); }) == ErrorCode::IoFailure);
}

TEST_CASE("manifest json is canonical and its hash tracks content") {
    RunManifest manifest;
    manifest.command = "synth";
    manifest.parameters = {{"k", "7"}, {"n", "100"}, {"concentration", "1"}};
    manifest.seed = 42;
    manifest.input_paths = {};
    manifest.output_paths = {"scores.txt", "labels.txt"};

    const auto a = manifest_json(manifest);
    const auto b = manifest_json(manifest);
    CHECK(a == b);
    CHECK(manifest_hash(manifest).size() == 16);

    auto changed = manifest;
    changed.seed = 43;
    CHECK(manifest_hash(changed) != manifest_hash(manifest));

    // parameter insertion order does not matter: keys are sorted
    auto reordered = manifest;
    reordered.parameters = {{"n", "100"}, {"concentration", "1"}, {"k", "7"}};
    CHECK(manifest_json(reordered) == a);
}

TEST_CASE("result tables carry the manifest hash in a comment block") {
    RunManifest manifest;
    manifest.command = "sweep";
    manifest.seed = 1;
    const auto table = result_table(manifest, {"alpha", "empty"}, {{"0.5", "3"}, {"1", "10"}});
    CHECK(table.find("# uqkit-result v1\n") == 0);
    CHECK(table.find("# command=sweep\n") != std::string::npos);
    CHECK(table.find("# manifest_hash=" + manifest_hash(manifest)) != std::string::npos);
    CHECK(table.find("alpha empty\n") != std::string::npos);
    CHECK(table.find("0.5 3\n") != std::string::npos);

    CHECK(code_of([&] { result_table(manifest, {"a", "b"}, {{"1"}}); }) == ErrorCode::Internal);
}
