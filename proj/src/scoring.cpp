#include "regtrace/scoring.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"
#include "regtrace/text.hpp"

namespace regtrace {

namespace {

std::size_t span_overlap(const Span& a, const Span& b) {
    if (a.provision != b.provision) return 0;
    const std::size_t lo = std::max(a.start, b.start);
    const std::size_t hi = std::min(a.end, b.end);
    return hi > lo ? hi - lo : 0;
}

Centi rubric_score(bool span_exact, bool concept_match) {
    if (span_exact) return concept_match ? 100 : 90;
    return concept_match ? 80 : 70;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    return quoted + "\"";
}

}  // namespace

std::vector<MatchPair> match_annotations(const AnnotationSet& candidate, const AnnotationSet& gold) {
    if (candidate.corpus_id != gold.corpus_id) {
        throw ValidationError("corpus mismatch: candidate set is for \"" + candidate.corpus_id +
                              "\", gold set for \"" + gold.corpus_id + "\"");
    }

    struct Eligible {
        std::size_t overlap;
        const Annotation* gold;
        const Annotation* candidate;
    };
    std::vector<Eligible> eligible;
    for (const auto& g : gold.annotations) {
        for (const auto& c : candidate.annotations) {
            const std::size_t overlap = span_overlap(g.span, c.span);
            if (overlap > 0) eligible.push_back({overlap, &g, &c});
        }
    }
    std::sort(eligible.begin(), eligible.end(), [](const Eligible& a, const Eligible& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.gold->id != b.gold->id) return a.gold->id < b.gold->id;
        return a.candidate->id < b.candidate->id;
    });

    std::set<std::string> used_gold, used_candidate;
    std::vector<MatchPair> matching;
    for (const auto& e : eligible) {
        if (used_gold.contains(e.gold->id) || used_candidate.contains(e.candidate->id)) continue;
        used_gold.insert(e.gold->id);
        used_candidate.insert(e.candidate->id);
        MatchPair pair;
        pair.gold = e.gold->id;
        pair.candidate = e.candidate->id;
        pair.span_exact = e.gold->span == e.candidate->span;
        pair.concept_match = e.gold->kind == e.candidate->kind;
        pair.overlap = e.overlap;
        matching.push_back(std::move(pair));
    }
    // Report pairs in gold-set order for stable output.
    std::map<std::string, std::size_t> gold_order;
    for (std::size_t i = 0; i < gold.annotations.size(); ++i) {
        gold_order[gold.annotations[i].id] = i;
    }
    std::sort(matching.begin(), matching.end(), [&](const MatchPair& a, const MatchPair& b) {
        return gold_order[a.gold] < gold_order[b.gold];
    });
    return matching;
}

Centi ScoreReport::score_for(const std::string& gold_id) const {
    for (const auto& [id, value] : per_gold) {
        if (id == gold_id) return value;
    }
    throw ValidationError("report for \"" + participant + "\" has no score for gold id \"" +
                          gold_id + "\"");
}

ScoreReport score(const std::vector<MatchPair>& matching, const AnnotationSet& candidate,
                  const AnnotationSet& gold) {
    std::map<std::string, const MatchPair*> by_gold;
    for (const auto& pair : matching) by_gold.emplace(pair.gold, &pair);

    ScoreReport report;
    report.participant = candidate.author;
    for (const auto& g : gold.annotations) {
        const auto it = by_gold.find(g.id);
        const Centi value =
            it == by_gold.end() ? 0 : rubric_score(it->second->span_exact, it->second->concept_match);
        report.per_gold.emplace_back(g.id, value);
    }
    report.extras = static_cast<int>(candidate.annotations.size() - matching.size());
    return report;
}

bool AliasMap::equivalent(const std::string& a, const std::string& b) const {
    const std::string na = normalize_name(a);
    const std::string nb = normalize_name(b);
    if (na == nb) return true;
    for (const auto& group : groups) {
        bool has_a = false, has_b = false;
        for (const auto& name : group) {
            const std::string n = normalize_name(name);
            has_a = has_a || n == na;
            has_b = has_b || n == nb;
        }
        if (has_a && has_b) return true;
    }
    return false;
}

AliasMap parse_aliases(const std::string& input) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("aliases: ") + e.what());
    }
    const nlohmann::json* jgroups = &root;
    if (root.is_object()) {
        if (!root.contains("aliases")) throw ParseError("aliases: missing \"aliases\" array");
        jgroups = &root["aliases"];
    }
    if (!jgroups->is_array()) throw ParseError("aliases: expected an array of name groups");
    AliasMap map;
    for (const auto& jgroup : *jgroups) {
        if (!jgroup.is_array()) throw ParseError("aliases: each group must be an array of names");
        std::vector<std::string> group;
        for (const auto& name : jgroup) {
            if (!name.is_string()) throw ParseError("aliases: names must be strings");
            group.push_back(name.get<std::string>());
        }
        if (group.size() < 2) throw ParseError("aliases: each group needs at least two names");
        map.groups.push_back(std::move(group));
    }
    return map;
}

ComponentComparison compare_components(const ContentModel& candidate, const ContentModel& gold,
                                       const AliasMap& aliases) {
    std::vector<const Instance*> gold_components;
    for (const auto& inst : gold.instances) {
        if (inst.level == AbstractionLevel::System) gold_components.push_back(&inst);
    }
    std::vector<const Instance*> candidate_components;
    for (const auto& inst : candidate.instances) {
        if (inst.level == AbstractionLevel::System) candidate_components.push_back(&inst);
    }

    ComponentComparison result;
    std::set<std::string> matched_candidates;
    for (const Instance* g : gold_components) {
        bool matched = false;
        for (const Instance* c : candidate_components) {
            if (aliases.equivalent(g->name, c->name)) {
                matched = true;
                matched_candidates.insert(c->id);
            }
        }
        result.per_gold_component.emplace_back(g->name, matched);
    }
    for (const Instance* c : candidate_components) {
        if (!matched_candidates.contains(c->id)) ++result.extras;
    }
    return result;
}

std::vector<AggregateCell> aggregate_scores(const std::vector<ScoreReport>& reports) {
    if (reports.empty()) throw ValidationError("no score reports to aggregate");
    const auto& first = reports.front();
    for (const auto& report : reports) {
        if (report.per_gold.size() != first.per_gold.size()) {
            throw ValidationError("report for \"" + report.participant +
                                  "\" covers a different set of gold annotations");
        }
    }

    std::vector<AggregateCell> cells;
    for (const auto& [gold_id, unused] : first.per_gold) {
        (void)unused;
        std::vector<Centi> values;
        values.reserve(reports.size());
        for (const auto& report : reports) values.push_back(report.score_for(gold_id));
        AggregateCell cell;
        cell.gold = gold_id;
        cell.median = median(values);
        cell.modes = modes(std::move(values));
        cells.push_back(std::move(cell));
    }
    return cells;
}

std::string score_table_csv(const std::vector<ScoreReport>& reports, bool aggregate) {
    if (reports.empty()) return "participant,A+\n";
    std::string out = "participant";
    for (const auto& [gold_id, unused] : reports.front().per_gold) {
        (void)unused;
        out += "," + csv_field(gold_id);
    }
    out += ",A+\n";
    for (const auto& report : reports) {
        out += csv_field(report.participant);
        for (const auto& [id, value] : report.per_gold) {
            (void)id;
            out += "," + format_centi(value);
        }
        out += "," + std::to_string(report.extras) + "\n";
    }
    if (aggregate) {
        const auto cells = aggregate_scores(reports);
        out += "Median";
        for (const auto& cell : cells) out += "," + format_centi(cell.median);
        out += ",\nMode";
        for (const auto& cell : cells) out += "," + csv_field(format_centi_list(cell.modes));
        out += ",\n";
    }
    return out;
}

}  // namespace regtrace
