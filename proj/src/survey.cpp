#include "regtrace/survey.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace regtrace {

namespace {

// Minimal CSV reader: comma-separated, double quotes escape fields,
// tolerates \r\n. Sufficient for the survey format.
std::vector<std::vector<std::string>> read_csv(const std::string& input) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < input.size(); ++i) {
        const char c = input[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < input.size() && input[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; any = true; break;
            case ',': row.push_back(std::move(field)); field.clear(); any = true; break;
            case '\r': break;
            case '\n':
                if (any || !field.empty() || !row.empty()) {
                    row.push_back(std::move(field));
                    rows.push_back(std::move(row));
                }
                field.clear();
                row.clear();
                any = false;
                break;
            default: field.push_back(c); any = true; break;
        }
    }
    if (quoted) throw ParseError("survey: unterminated quoted field");
    if (any || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

Centi parse_rating_value(const std::string& text, const std::string& where) {
    const Centi value = parse_centi(text);
    if (value < 100 || value > 500 || value % 50 != 0) {
        throw ParseError(where + ": rating \"" + text + "\" out of range (1..5, half steps)");
    }
    return value;
}

Rating parse_rating(const std::string& raw, const std::string& where) {
    const std::string text = trim(raw);
    const std::size_t open = text.find('(');
    Rating rating;
    if (open == std::string::npos) {
        rating.primary = parse_rating_value(text, where);
        return rating;
    }
    if (text.back() != ')' || open == 0) {
        throw ParseError(where + ": malformed dual rating \"" + raw + "\"");
    }
    rating.primary = parse_rating_value(text.substr(0, open), where);
    rating.secondary = parse_rating_value(text.substr(open + 1, text.size() - open - 2), where);
    return rating;
}

int parse_ranking(const std::string& raw, const std::string& where) {
    const std::string text = trim(raw);
    if (text.size() != 1 || text[0] < '1' || text[0] > '5') {
        throw ParseError(where + ": ranking \"" + raw + "\" must be an integer in 1..5");
    }
    return text[0] - '0';
}

std::string format_rating(const Rating& rating) {
    std::string out = format_centi(rating.primary);
    if (rating.secondary) out += "(" + format_centi(*rating.secondary) + ")";
    return out;
}

}  // namespace

std::string objective_label(int index) {
    return "SO" + std::to_string(index + 1);
}

SurveyDataset load_survey(const std::string& input) {
    const auto rows = read_csv(input);
    if (rows.empty()) throw ParseError("survey: empty file");

    std::vector<std::string> expected = {"participant"};
    for (int i = 0; i < kSurveyObjectives; ++i) expected.push_back(objective_label(i));
    for (int i = 0; i < kSurveyObjectives; ++i) expected.push_back("rank_" + objective_label(i));
    if (rows.front() != expected) {
        throw ParseError("survey: unexpected header; expected participant,SO1..SO5,rank_SO1..rank_SO5");
    }

    SurveyDataset dataset;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != expected.size()) {
            throw ParseError("survey: row " + std::to_string(r + 1) + " has " +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(expected.size()));
        }
        SurveyRecord record;
        record.participant = trim(row[0]);
        if (record.participant.empty()) {
            throw ParseError("survey: row " + std::to_string(r + 1) + " has an empty participant id");
        }
        for (int i = 0; i < kSurveyObjectives; ++i) {
            const std::string where = record.participant + " " + objective_label(i);
            record.ratings[i] = parse_rating(row[1 + i], where);
            record.rankings[i] = parse_ranking(row[1 + kSurveyObjectives + i], where);
        }
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

std::string serialize_survey(const SurveyDataset& dataset) {
    std::string out = "participant";
    for (int i = 0; i < kSurveyObjectives; ++i) out += "," + objective_label(i);
    for (int i = 0; i < kSurveyObjectives; ++i) out += ",rank_" + objective_label(i);
    out += "\n";
    for (const auto& record : dataset.records) {
        out += record.participant;
        for (const auto& rating : record.ratings) out += "," + format_rating(rating);
        for (int ranking : record.rankings) out += "," + std::to_string(ranking);
        out += "\n";
    }
    return out;
}

std::vector<Diagnostic> validate_survey(const SurveyDataset& dataset) {
    std::vector<Diagnostic> diags;
    for (const auto& record : dataset.records) {
        std::set<int> ranks(record.rankings.begin(), record.rankings.end());
        if (ranks.size() != record.rankings.size()) {
            diags.push_back({Severity::Warning, record.participant,
                             "rankings are not a permutation of 1..5 (each ranking is meant to be "
                             "assigned only once)"});
        }
        for (int i = 0; i < kSurveyObjectives; ++i) {
            if (record.rankings[i] == 1 && record.ratings[i].primary == 100) {
                diags.push_back({Severity::Warning, record.participant,
                                 objective_label(i) +
                                     " is ranked most important (1) but rated lowest importance (1)"});
            }
        }
    }
    return diags;
}

SurveySummary aggregate_survey(const SurveyDataset& dataset) {
    if (dataset.records.empty()) throw ValidationError("survey dataset is empty");
    SurveySummary summary;
    for (int i = 0; i < kSurveyObjectives; ++i) {
        std::vector<Centi> primary, with_secondary, rankings;
        for (const auto& record : dataset.records) {
            const Rating& rating = record.ratings[i];
            primary.push_back(rating.primary);
            with_secondary.push_back(rating.secondary.value_or(rating.primary));
            rankings.push_back(record.rankings[i] * 100);
        }
        ObjectiveSummary& cell = summary.objectives[i];
        cell.rating_median = median(primary);
        cell.rating_modes = modes(primary);
        cell.secondary_rating_median = median(with_secondary);
        cell.ranking_median = median(rankings);
        cell.ranking_modes = modes(rankings);
    }
    return summary;
}

std::string survey_summary_csv(const SurveySummary& summary) {
    const auto csv_field = [](const std::string& value) {
        if (value.find(',') == std::string::npos) return value;
        return "\"" + value + "\"";
    };
    std::string out =
        "objective,rating_median,rating_modes,secondary_rating_median,ranking_median,ranking_modes\n";
    for (int i = 0; i < kSurveyObjectives; ++i) {
        const ObjectiveSummary& cell = summary.objectives[i];
        out += objective_label(i);
        out += "," + format_centi(cell.rating_median);
        out += "," + csv_field(format_centi_list(cell.rating_modes));
        out += "," + format_centi(cell.secondary_rating_median);
        out += "," + format_centi(cell.ranking_median);
        out += "," + csv_field(format_centi_list(cell.ranking_modes));
        out += "\n";
    }
    return out;
}

}  // namespace regtrace
