#include "uq/io.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uq/text.hpp"

namespace uq::io {
namespace {

std::size_t parse_k_header(std::string_view line) {
    if (line.substr(0, 2) != "k=") {
        throw Error(ErrorCode::CorruptRecord, "expected k=<K> header, got: " + std::string(line));
    }
    const auto k = parse_uint(line.substr(2));
    if (!k || *k < 2) {
        throw Error(ErrorCode::CorruptRecord, "bad class count in header: " + std::string(line));
    }
    return static_cast<std::size_t>(*k);
}

std::vector<std::string_view> data_lines(const std::string& text) {
    auto lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) {
        throw Error(ErrorCode::CorruptRecord, "empty file");
    }
    return lines;
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in.good() && !in.eof()) {
        throw Error(ErrorCode::IoFailure, "read failed for " + path.string());
    }
    return buffer.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    static std::atomic<unsigned> counter{0};
    const auto tmp = path.parent_path() /
                     (path.filename().string() + ".tmp" + std::to_string(counter.fetch_add(1)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::IoFailure, "cannot create " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out.good()) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorCode::IoFailure, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoFailure, "rename to " + path.string() + " failed");
    }
}

std::string encode_scores(const ScoreMatrix& scores) {
    std::string out = "k=" + std::to_string(scores.classes()) + "\n";
    for (std::size_t r = 0; r < scores.rows(); ++r) {
        const auto row = scores.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ' ';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

ScoreMatrix decode_scores(const std::string& text) {
    const auto lines = data_lines(text);
    const std::size_t k = parse_k_header(lines.front());
    if (lines.size() < 2) {
        throw Error(ErrorCode::CorruptRecord, "scores file has no data rows");
    }
    std::vector<double> flat;
    flat.reserve((lines.size() - 1) * k);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::size_t vals_in_row = 0;
        for (std::string_view token : split(lines[i], ' ')) {
            const auto value = parse_double(token);
            if (!value) {
                throw Error(ErrorCode::CorruptRecord,
                            "line " + std::to_string(i + 1) + ": bad number '" +
                                std::string(token) + "'");
            }
            flat.push_back(*value);
            ++vals_in_row;
        }
        if (vals_in_row != k) {
            throw Error(ErrorCode::CorruptRecord,
                        "line " + std::to_string(i + 1) + " has " + std::to_string(vals_in_row) +
                            " values, expected " + std::to_string(k));
        }
    }
    return validate_scores(std::move(flat), k);
}

std::string encode_labels(const std::vector<std::size_t>& labels, std::size_t k_classes) {
    std::string out = "k=" + std::to_string(k_classes) + "\n";
    for (std::size_t label : labels) {
        out += std::to_string(label);
        out += '\n';
    }
    return out;
}

std::vector<std::size_t> decode_labels(const std::string& text, std::size_t& k_classes) {
    const auto lines = data_lines(text);
    k_classes = parse_k_header(lines.front());
    std::vector<std::size_t> labels;
    labels.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto label = parse_uint(lines[i]);
        if (!label) {
            throw Error(ErrorCode::CorruptRecord,
                        "line " + std::to_string(i + 1) + ": bad label '" +
                            std::string(lines[i]) + "'");
        }
        if (*label >= k_classes) {
            throw Error(ErrorCode::LabelOutOfRange,
                        "line " + std::to_string(i + 1) + ": label " + std::to_string(*label) +
                            " >= K=" + std::to_string(k_classes));
        }
        labels.push_back(static_cast<std::size_t>(*label));
    }
    return labels;
}

std::string encode_sets(const std::vector<conformal::PredictionSet>& sets,
                        std::size_t k_classes) {
    std::string out = "k=" + std::to_string(k_classes) + "\n";
    for (const auto& set : sets) {
        out += std::to_string(set.k_star);
        out += ' ';
        out += format_double(set.uncertainty);
        for (std::size_t member : set.members) {
            out += ' ';
            out += std::to_string(member);
        }
        out += '\n';
    }
    return out;
}

std::vector<conformal::PredictionSet> decode_sets(const std::string& text,
                                                  std::size_t& k_classes) {
    const auto lines = data_lines(text);
    k_classes = parse_k_header(lines.front());
    std::vector<conformal::PredictionSet> sets;
    sets.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto tokens = split(lines[i], ' ');
        if (tokens.size() < 2) {
            throw Error(ErrorCode::CorruptRecord, "line " + std::to_string(i + 1) + " truncated");
        }
        const auto k_star = parse_uint(tokens[0]);
        const auto uncertainty = parse_double(tokens[1]);
        if (!k_star || !uncertainty || tokens.size() != 2 + *k_star || *k_star > k_classes) {
            throw Error(ErrorCode::CorruptRecord,
                        "line " + std::to_string(i + 1) + ": inconsistent set record");
        }
        conformal::PredictionSet set;
        set.k_star = static_cast<std::size_t>(*k_star);
        set.uncertainty = *uncertainty;
        if (set.uncertainty !=
            conformal::set_uncertainty(static_cast<double>(set.k_star), k_classes)) {
            throw Error(ErrorCode::CorruptRecord,
                        "line " + std::to_string(i + 1) + ": uncertainty does not match k*/K");
        }
        for (std::size_t m = 0; m < set.k_star; ++m) {
            const auto member = parse_uint(tokens[2 + m]);
            if (!member || *member >= k_classes) {
                throw Error(ErrorCode::CorruptRecord,
                            "line " + std::to_string(i + 1) + ": bad member index");
            }
            set.members.push_back(static_cast<std::size_t>(*member));
        }
        sets.push_back(std::move(set));
    }
    return sets;
}

std::string manifest_json(const RunManifest& manifest) {
    nlohmann::json doc;
    doc["artifact_version"] = kArtifactVersion;
    doc["command"] = manifest.command;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : manifest.parameters) params[key] = value;
    doc["parameters"] = params;
    doc["seed"] = manifest.seed;
    doc["inputs"] = manifest.input_paths;
    doc["outputs"] = manifest.output_paths;
    return doc.dump(2) + "\n";
}

std::string manifest_hash(const RunManifest& manifest) {
    return to_hex(fnv1a64(manifest_json(manifest)));
}

std::string result_table(const RunManifest& manifest,
                         const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows) {
    std::string out = "# uqkit-result v1\n";
    out += "# command=" + manifest.command + "\n";
    out += "# manifest_hash=" + manifest_hash(manifest) + "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ' ';
        out += columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw Error(ErrorCode::Internal, "result row width differs from header");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ' ';
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

}  // namespace uq::io
