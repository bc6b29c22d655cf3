#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtforge {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

// Case-insensitive (ASCII) search. Return npos when absent.
std::size_t find_icase(std::string_view haystack, std::string_view needle, std::size_t from = 0);
std::size_t rfind_icase(std::string_view haystack, std::string_view needle);

std::vector<std::string_view> split_lines(std::string_view s);
std::string replace_all(std::string s, std::string_view from, std::string_view to);

// Parses an optionally signed base-10 integer that spans the whole view.
std::optional<long long> parse_int(std::string_view s);

// UTF-8 code points; invalid bytes decode to U+FFFD one byte at a time.
std::vector<char32_t> utf8_decode(std::string_view s);

// 64-bit FNV-1a. Stable across platforms and runs; used for mock fixtures and
// deterministic coin flips, never for security.
std::uint64_t stable_hash(std::string_view s, std::uint64_t seed = 0);

// SHA-256 of `data` as lowercase hex.
std::string sha256_hex(std::string_view data);

}  // namespace mtforge
