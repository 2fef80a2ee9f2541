#pragma once

#include <string>
#include <vector>

namespace regtrace {

// Rubric scores and survey values are exact decimals (tenths or halves).
// They are carried as integer hundredths so medians and modes never pick
// up binary floating error.

/// 1.0 -> 100, 0.7 -> 70, 3.5 -> 350.
using Centi = int;

/// Midpoint median: mean of the two central values for even counts.
/// Exact for inputs on a tenth or half grid. values must be non-empty.
Centi median(std::vector<Centi> values);

/// All values attaining the maximal frequency, ascending. values must be
/// non-empty.
std::vector<Centi> modes(std::vector<Centi> values);

/// Shortest decimal form: 100 -> "1", 70 -> "0.7", 75 -> "0.75", 450 -> "4.5".
std::string format_centi(Centi value);

/// Comma-joined ascending list: {70, 90} -> "0.7,0.9".
std::string format_centi_list(const std::vector<Centi>& values);

/// Parse a decimal like "4", "3.5", "0.75" into hundredths. Throws
/// ParseError when the text is not a plain decimal with at most two
/// fraction digits.
Centi parse_centi(const std::string& text);

}  // namespace regtrace
