#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uq {

// Shortest decimal form that parses back to the same double ("%.17g" with
// trailing precision trimmed); "inf" for +infinity. Locale-independent.
std::string format_double(double value);

// Strict parsers: the whole token must be consumed. nullopt on failure.
std::optional<double> parse_double(std::string_view token);      // accepts "inf"
std::optional<std::uint64_t> parse_uint(std::string_view token);

std::vector<std::string_view> split(std::string_view text, char sep);

// FNV-1a 64-bit; identity tag for manifests, not a cryptographic hash.
std::uint64_t fnv1a64(std::string_view text) noexcept;
std::string to_hex(std::uint64_t value);

}  // namespace uq
