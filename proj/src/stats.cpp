#include "regtrace/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "regtrace/errors.hpp"

namespace regtrace {

Centi median(std::vector<Centi> values) {
    if (values.empty()) throw ValidationError("median of empty value list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    // Inputs sit on a tenth/half grid, so the midpoint is an exact hundredth.
    return (values[n / 2 - 1] + values[n / 2]) / 2;
}

std::vector<Centi> modes(std::vector<Centi> values) {
    if (values.empty()) throw ValidationError("mode of empty value list");
    std::sort(values.begin(), values.end());
    std::vector<Centi> out;
    std::size_t best = 0;
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        const std::size_t run = j - i;
        if (run > best) {
            best = run;
            out.clear();
        }
        if (run == best) out.push_back(values[i]);
        i = j;
    }
    return out;
}

std::string format_centi(Centi value) {
    std::string out;
    if (value < 0) {
        out.push_back('-');
        value = -value;
    }
    out += std::to_string(value / 100);
    const int frac = value % 100;
    if (frac != 0) {
        out.push_back('.');
        if (frac % 10 == 0) {
            out += std::to_string(frac / 10);
        } else {
            if (frac < 10) out.push_back('0');
            out += std::to_string(frac);
        }
    }
    return out;
}

std::string format_centi_list(const std::vector<Centi>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out.push_back(',');
        out += format_centi(values[i]);
    }
    return out;
}

Centi parse_centi(const std::string& text) {
    const auto bad = [&]() -> ParseError { return ParseError("malformed decimal value: \"" + text + "\""); };
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) throw bad();
    long whole = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        whole = whole * 10 + (text[i] - '0');
        if (whole > 1000000) throw bad();
        ++i;
    }
    int frac = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        int digits = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (++digits > 2) throw bad();
            frac = frac * 10 + (text[i] - '0');
            ++i;
        }
        if (digits == 0) throw bad();
        if (digits == 1) frac *= 10;
    }
    if (i != text.size()) throw bad();
    const long value = whole * 100 + frac;
    return static_cast<Centi>(negative ? -value : value);
}

}  // namespace regtrace
