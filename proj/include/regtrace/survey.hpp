#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "regtrace/errors.hpp"
#include "regtrace/stats.hpp"

namespace regtrace {

// Specification-objective survey data: per participant, an importance
// rating per objective (1 low .. 5 high, halves allowed, optional
// secondary value) and an importance ranking (1 most .. 5 least
// important, each rank meant to be used once).

inline constexpr int kSurveyObjectives = 5;

/// Objective labels SO1..SO5.
std::string objective_label(int index);

struct Rating {
    Centi primary = 0;                  // hundredths, in [100, 500], half steps
    std::optional<Centi> secondary;     // same range when present

    bool operator==(const Rating&) const = default;
};

struct SurveyRecord {
    std::string participant;
    std::array<Rating, kSurveyObjectives> ratings;
    std::array<int, kSurveyObjectives> rankings{};  // each in [1, 5]

    bool operator==(const SurveyRecord&) const = default;
};

struct SurveyDataset {
    std::vector<SurveyRecord> records;

    bool operator==(const SurveyDataset&) const = default;
};

/// Read the survey CSV. Header:
///   participant,SO1,...,SO5,rank_SO1,...,rank_SO5
/// Rating cells are `P` or `P(S)` (e.g. "3.5(5)"). Throws ParseError for
/// malformed values and out-of-range ratings or rankings.
SurveyDataset load_survey(const std::string& input);

std::string serialize_survey(const SurveyDataset& dataset);

/// Warnings only: rankings that are not a permutation of 1..5, and
/// records rating an objective lowest (1) while ranking it most
/// important (1). Inconsistent records are kept, not rejected.
std::vector<Diagnostic> validate_survey(const SurveyDataset& dataset);

struct ObjectiveSummary {
    Centi rating_median = 0;
    std::vector<Centi> rating_modes;
    Centi secondary_rating_median = 0;  // secondary values, falling back to primary
    Centi ranking_median = 0;
    std::vector<Centi> ranking_modes;

    bool operator==(const ObjectiveSummary&) const = default;
};

struct SurveySummary {
    std::array<ObjectiveSummary, kSurveyObjectives> objectives;

    bool operator==(const SurveySummary&) const = default;
};

/// Medians (midpoint rule) and modes (all maximal-frequency values,
/// ascending) per objective. Throws ValidationError on an empty dataset.
SurveySummary aggregate_survey(const SurveyDataset& dataset);

/// CSV rendering of the summary, one row per objective.
std::string survey_summary_csv(const SurveySummary& summary);

}  // namespace regtrace
