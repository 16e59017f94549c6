#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "uq/conformal.hpp"
#include "uq/scores.hpp"

// Text file formats used by the CLI (documented in docs/FORMATS.md). All
// doubles are written in shortest round-trip form, so parse(emit(x)) == x
// bit-exactly. Writes go through a temp-file-then-rename so a crashed run
// never leaves a partial file under the final name.
namespace uq::io {

inline constexpr const char* kArtifactVersion = "1.0.0";

std::string read_text(const std::filesystem::path& path);
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// Scores file: "k=<K>" header, then one row of K probabilities per line.
std::string encode_scores(const ScoreMatrix& scores);
ScoreMatrix decode_scores(const std::string& text);

// Labels file: "k=<K>" header, then one zero-based label per line.
std::string encode_labels(const std::vector<std::size_t>& labels, std::size_t k_classes);
std::vector<std::size_t> decode_labels(const std::string& text, std::size_t& k_classes);

// Prediction-sets file: "k=<K>" header, then per sample
// "<k_star> <uncertainty> <members...>" in inclusion order.
std::string encode_sets(const std::vector<conformal::PredictionSet>& sets,
                        std::size_t k_classes);
std::vector<conformal::PredictionSet> decode_sets(const std::string& text,
                                                  std::size_t& k_classes);

// Everything needed to reproduce a command bit-exactly: resolved
// parameters (stringified), master seed, and the file paths touched.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::uint64_t seed = 0;
    std::vector<std::string> input_paths;
    std::vector<std::string> output_paths;
};

// Canonical JSON rendering (sorted keys); the manifest hash is FNV-1a of
// this string and is embedded in every result table the run emits.
std::string manifest_json(const RunManifest& manifest);
std::string manifest_hash(const RunManifest& manifest);

// Result table: "# uqkit-result v1" comment block carrying the command name
// and manifest hash, a header row, then space-delimited data rows.
std::string result_table(const RunManifest& manifest,
                         const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows);

}  // namespace uq::io
