#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace regtrace {

// Offsets into provision text are counted in Unicode scalar values, not
// bytes. These helpers translate between the two for UTF-8 strings.

/// Number of Unicode scalar values in a UTF-8 string.
std::size_t scalar_length(std::string_view text);

/// Byte offset of the scalar at `scalar_index` (== text.size() when the
/// index equals the scalar length). Returns npos when the index is past
/// the end of the string.
std::size_t scalar_byte_offset(std::string_view text, std::size_t scalar_index);

/// Substring [start, end) in scalar coordinates. Both bounds must be
/// within [0, scalar_length(text)] and start <= end.
std::string_view scalar_slice(std::string_view text, std::size_t start, std::size_t end);

/// Lowercased, whitespace-collapsed form used for duplicate detection and
/// component matching. ASCII-only folding; names are plain noun phrases.
std::string normalize_name(std::string_view name);

}  // namespace regtrace
