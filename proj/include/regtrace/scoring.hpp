#pragma once

#include <string>
#include <vector>

#include "regtrace/annotation.hpp"
#include "regtrace/model.hpp"
#include "regtrace/stats.hpp"

namespace regtrace {

// Comparison of a candidate annotation set against a gold standard.
// Scores are exact tenths carried as hundredths (see stats.hpp):
//   100 span and concept both correct
//    90 span exactly correct, wrong concept
//    80 span partially correct, concept correct
//    70 span partially correct, wrong concept
//     0 not identified
// All functions are pure; different candidates may be scored in parallel.

struct MatchPair {
    std::string gold;
    std::string candidate;
    bool span_exact = false;
    bool concept_match = false;
    std::size_t overlap = 0;  // shared scalar values, always >= 1

    bool operator==(const MatchPair&) const = default;
};

/// One-to-one partial matching between candidate and gold annotations.
/// Only same-provision pairs with overlapping spans are eligible; pairs
/// are selected greedily by (overlap desc, gold id asc, candidate id asc).
/// Throws ValidationError when the sets name different corpora.
std::vector<MatchPair> match_annotations(const AnnotationSet& candidate, const AnnotationSet& gold);

struct ScoreReport {
    std::string participant;
    std::vector<std::pair<std::string, Centi>> per_gold;  // gold id -> score, gold order
    int extras = 0;                                       // unmatched candidates (A+)

    Centi score_for(const std::string& gold_id) const;
    bool operator==(const ScoreReport&) const = default;
};

/// Apply the rubric to a matching produced by match_annotations.
ScoreReport score(const std::vector<MatchPair>& matching, const AnnotationSet& candidate,
                  const AnnotationSet& gold);

/// Name equivalences for component comparison, beyond normalized-name
/// equality. Each group lists names treated as the same component.
struct AliasMap {
    std::vector<std::vector<std::string>> groups;

    /// True when the two normalized names are equal or share a group.
    bool equivalent(const std::string& a, const std::string& b) const;
};

AliasMap parse_aliases(const std::string& input);

struct ComponentComparison {
    /// gold system-level instance name -> identified by the candidate.
    std::vector<std::pair<std::string, bool>> per_gold_component;
    int extras = 0;  // unmatched candidate components (C+)

    bool operator==(const ComponentComparison&) const = default;
};

/// Compare system-level instances of two models by normalized name plus
/// aliases. Covers every gold system-level instance, in model order.
ComponentComparison compare_components(const ContentModel& candidate, const ContentModel& gold,
                                       const AliasMap& aliases);

struct AggregateCell {
    std::string gold;
    Centi median = 0;
    std::vector<Centi> modes;  // all maximal-frequency values, ascending

    bool operator==(const AggregateCell&) const = default;
};

/// Median and modes per gold annotation over a list of reports. All
/// reports must cover the same gold ids; cell order follows the first
/// report.
std::vector<AggregateCell> aggregate_scores(const std::vector<ScoreReport>& reports);

/// CSV export mirroring the experiment table: one row per participant
/// with per-gold scores and the extras count, then Median and Mode rows
/// when `aggregate` is set. Multimodal cells are comma-joined ascending.
std::string score_table_csv(const std::vector<ScoreReport>& reports, bool aggregate);

}  // namespace regtrace
