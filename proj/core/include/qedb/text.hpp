#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qedb::text {

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

// Substring by code-point offsets [start, end). Offsets past the end clamp.
std::string utf8_substr(std::string_view s, std::size_t start, std::size_t end);

// ASCII lowercase; non-ASCII bytes pass through untouched.
std::string to_lower(std::string_view s);

// Collapse runs of whitespace to single spaces and trim the ends.
std::string collapse_whitespace(std::string_view s);

// True if `needle` occurs in `haystack`, compared case-insensitively (ASCII).
bool icontains(std::string_view haystack, std::string_view needle);

// Lowercased tokens split on whitespace and ASCII punctuation.
// Punctuation-only runs produce no token. Non-ASCII bytes are token characters.
std::vector<std::string> tokenize(std::string_view s);

}  // namespace qedb::text
