#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "regtrace/corpus.hpp"
#include "regtrace/errors.hpp"

namespace regtrace {

// Concept taxonomy for annotating regulation text. Targets of regulation
// and compliance controls are legal objects; criteria qualify them.
enum class ConceptKind {
    TargetOfRegulation,
    ComplianceControl,
    Criterion,
};

constexpr bool is_legal_object(ConceptKind kind) {
    return kind != ConceptKind::Criterion;
}

/// File tag: "target" | "control" | "criterion".
std::string_view concept_tag(ConceptKind kind);
/// Display marker: "<<target>>" | "<<control>>" | "<<criterion>>".
std::string_view concept_marker(ConceptKind kind);
/// Inverse of concept_tag. Throws ParseError on unknown tags.
ConceptKind concept_from_tag(std::string_view tag);

// Where a model instance lives: requirements specification (abstract,
// needs further interpretation) or system specification (directly
// system-related).
enum class AbstractionLevel {
    Requirements,
    System,
};

/// File tag: "requirements" | "system".
std::string_view level_tag(AbstractionLevel level);
AbstractionLevel level_from_tag(std::string_view tag);

/// Standoff annotation: a span into the corpus plus a redundant copy of
/// the selected text. The quote must equal the span's slice exactly; the
/// redundancy catches corpus-edition drift.
struct Annotation {
    std::string id;
    Span span;
    std::string quote;
    ConceptKind kind = ConceptKind::TargetOfRegulation;
    std::string instance_hint;  // free-text content-model instance name, optional
    std::string note;           // optional

    bool operator==(const Annotation&) const = default;
};

struct AnnotationSet {
    std::string corpus_id;
    std::string author;
    std::vector<Annotation> annotations;

    bool operator==(const AnnotationSet&) const = default;
};

/// Read the annotation file format without consulting a corpus. Throws
/// ParseError for malformed JSON, unknown concept tags, or ill-formed
/// provision references.
AnnotationSet parse_annotation_set(const std::string& input);

std::string serialize_annotations(const AnnotationSet& set);

/// Check every annotation invariant against the corpus: provisions
/// resolve, spans are in bounds, quotes match their slice, ids are
/// unique, and the set's corpus id matches the document. Overlapping and
/// nested spans are legal and produce no diagnostic.
std::vector<Diagnostic> validate_annotations(const AnnotationSet& set, const LegalDocument& doc);

/// parse + validate; throws ValidationError on the first error-severity
/// diagnostic.
AnnotationSet load_annotations(const std::string& input, const LegalDocument& doc);

}  // namespace regtrace
