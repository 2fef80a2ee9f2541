#include "regtrace/text.hpp"

#include <cctype>

namespace regtrace {

namespace {

// Width of the UTF-8 sequence starting at `byte`. Continuation and invalid
// lead bytes count as width 1 so malformed input still terminates.
std::size_t sequence_width(unsigned char byte) {
    if (byte < 0x80) return 1;
    if ((byte & 0xE0) == 0xC0) return 2;
    if ((byte & 0xF0) == 0xE0) return 3;
    if ((byte & 0xF8) == 0xF0) return 4;
    return 1;
}

}  // namespace

std::size_t scalar_length(std::string_view text) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < text.size(); i += sequence_width(static_cast<unsigned char>(text[i]))) {
        ++count;
    }
    return count;
}

std::size_t scalar_byte_offset(std::string_view text, std::size_t scalar_index) {
    std::size_t byte = 0;
    for (std::size_t seen = 0; seen < scalar_index; ++seen) {
        if (byte >= text.size()) return std::string_view::npos;
        byte += sequence_width(static_cast<unsigned char>(text[byte]));
    }
    return byte <= text.size() ? byte : std::string_view::npos;
}

std::string_view scalar_slice(std::string_view text, std::size_t start, std::size_t end) {
    const std::size_t from = scalar_byte_offset(text, start);
    const std::size_t to = scalar_byte_offset(text, end);
    return text.substr(from, to - from);
}

std::string normalize_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    bool pending_space = false;
    for (char c : name) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace regtrace
