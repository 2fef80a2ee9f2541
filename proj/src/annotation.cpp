#include "regtrace/annotation.hpp"

#include <set>
#include <utility>

#include "json.hpp"

namespace regtrace {

namespace {

using nlohmann::ordered_json;

}  // namespace

std::string_view concept_tag(ConceptKind kind) {
    switch (kind) {
        case ConceptKind::TargetOfRegulation: return "target";
        case ConceptKind::ComplianceControl: return "control";
        case ConceptKind::Criterion: return "criterion";
    }
    return "";
}

std::string_view concept_marker(ConceptKind kind) {
    switch (kind) {
        case ConceptKind::TargetOfRegulation: return "<<target>>";
        case ConceptKind::ComplianceControl: return "<<control>>";
        case ConceptKind::Criterion: return "<<criterion>>";
    }
    return "";
}

ConceptKind concept_from_tag(std::string_view tag) {
    if (tag == "target") return ConceptKind::TargetOfRegulation;
    if (tag == "control") return ConceptKind::ComplianceControl;
    if (tag == "criterion") return ConceptKind::Criterion;
    throw ParseError("unknown concept tag: \"" + std::string(tag) + "\"");
}

std::string_view level_tag(AbstractionLevel level) {
    return level == AbstractionLevel::Requirements ? "requirements" : "system";
}

AbstractionLevel level_from_tag(std::string_view tag) {
    if (tag == "requirements") return AbstractionLevel::Requirements;
    if (tag == "system") return AbstractionLevel::System;
    throw ParseError("unknown abstraction level tag: \"" + std::string(tag) + "\"");
}

AnnotationSet parse_annotation_set(const std::string& input) {
    ordered_json root;
    try {
        root = ordered_json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("annotations: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("annotations: top-level value must be an object");

    const auto text_field = [](const ordered_json& obj, const char* key, const std::string& where,
                               bool required) -> std::string {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) throw ParseError(where + ": missing required field \"" + key + "\"");
            return {};
        }
        if (!it->is_string()) throw ParseError(where + ": field \"" + key + "\" must be a string");
        return it->get<std::string>();
    };

    AnnotationSet set;
    set.corpus_id = text_field(root, "corpus", "annotations", true);
    set.author = text_field(root, "author", "annotations", false);

    const auto it = root.find("annotations");
    if (it == root.end() || !it->is_array()) {
        throw ParseError("annotations: missing \"annotations\" array");
    }
    for (const auto& ja : *it) {
        Annotation a;
        a.id = text_field(ja, "id", "annotation", true);
        if (a.id.empty()) throw ParseError("annotation: id must be non-empty");
        const std::string where = "annotation " + a.id;
        a.span.provision = ProvisionRef::parse(text_field(ja, "provision", where, true));
        for (const char* key : {"start", "end"}) {
            const auto jv = ja.find(key);
            if (jv == ja.end() || !jv->is_number_unsigned()) {
                throw ParseError(where + ": field \"" + std::string(key) +
                                 "\" must be a non-negative integer");
            }
        }
        a.span.start = ja["start"].get<std::size_t>();
        a.span.end = ja["end"].get<std::size_t>();
        a.quote = text_field(ja, "quote", where, true);
        a.kind = concept_from_tag(text_field(ja, "concept", where, true));
        a.instance_hint = text_field(ja, "instance", where, false);
        a.note = text_field(ja, "note", where, false);
        set.annotations.push_back(std::move(a));
    }
    return set;
}

std::string serialize_annotations(const AnnotationSet& set) {
    ordered_json root;
    root["corpus"] = set.corpus_id;
    root["author"] = set.author;
    root["annotations"] = ordered_json::array();
    for (const auto& a : set.annotations) {
        ordered_json ja;
        ja["id"] = a.id;
        ja["provision"] = a.span.provision.str();
        ja["start"] = a.span.start;
        ja["end"] = a.span.end;
        ja["quote"] = a.quote;
        ja["concept"] = std::string(concept_tag(a.kind));
        if (!a.instance_hint.empty()) ja["instance"] = a.instance_hint;
        if (!a.note.empty()) ja["note"] = a.note;
        root["annotations"].push_back(std::move(ja));
    }
    return root.dump(2) + "\n";
}

std::vector<Diagnostic> validate_annotations(const AnnotationSet& set, const LegalDocument& doc) {
    std::vector<Diagnostic> diags;
    if (set.corpus_id != doc.id) {
        diags.push_back({Severity::Error, set.corpus_id,
                         "annotation set is for corpus \"" + set.corpus_id +
                             "\" but document is \"" + doc.id + "\""});
        return diags;
    }

    std::set<std::string> seen_ids;
    for (const auto& a : set.annotations) {
        if (!seen_ids.insert(a.id).second) {
            diags.push_back({Severity::Error, a.id, "duplicate annotation id"});
            continue;
        }
        std::string found;
        try {
            found = slice(doc, a.span);
        } catch (const ValidationError& e) {
            diags.push_back({Severity::Error, a.id, e.what()});
            continue;
        }
        if (found != a.quote) {
            diags.push_back({Severity::Error, a.id,
                             "quote mismatch at " + a.span.provision.str() + ": expected \"" +
                                 a.quote + "\", found \"" + found + "\""});
        }
    }
    return diags;
}

AnnotationSet load_annotations(const std::string& input, const LegalDocument& doc) {
    AnnotationSet set = parse_annotation_set(input);
    for (const auto& d : validate_annotations(set, doc)) {
        if (d.severity == Severity::Error) throw ValidationError(to_string(d));
    }
    return set;
}

}  // namespace regtrace
