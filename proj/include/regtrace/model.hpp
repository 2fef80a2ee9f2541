#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "regtrace/annotation.hpp"
#include "regtrace/corpus.hpp"
#include "regtrace/errors.hpp"

namespace regtrace {

// Content model assembled from annotations: concept instances allocated
// to abstraction levels, typed relations between them, and derived trace
// links back to the regulation text. Models are built single-threaded and
// immutable afterwards; every query is read-only.

/// A named concept instance. Every instance is grounded in the text
/// through at least one supporting annotation.
struct Instance {
    std::string id;
    std::string name;  // canonical noun phrase, unique after normalization
    ConceptKind kind = ConceptKind::ComplianceControl;
    AbstractionLevel level = AbstractionLevel::Requirements;
    std::vector<std::string> supported_by;  // annotation ids, never empty

    bool operator==(const Instance&) const = default;
};

enum class RelationKind {
    Addresses,  // control -> target
    Qualifies,  // criterion -> control or target
    DependsOn,  // control -> control
    Refines,    // system-level -> requirements-level
};

/// File tag: "addresses" | "qualifies" | "depends_on" | "refines".
std::string_view relation_tag(RelationKind kind);
RelationKind relation_from_tag(std::string_view tag);

struct Relation {
    RelationKind kind = RelationKind::Addresses;
    std::string from;
    std::string to;
    std::vector<std::string> supported_by;  // optional annotation grounding
    std::string note;

    bool operator==(const Relation&) const = default;
};

struct ContentModel {
    std::string corpus_id;
    std::vector<AnnotationSet> sources;
    std::vector<Instance> instances;
    std::vector<Relation> relations;

    bool operator==(const ContentModel&) const = default;

    const Instance* find_instance(std::string_view id) const;
    const Annotation* find_annotation(std::string_view id) const;
};

/// Derived, never stored: provision -> instance, grounded via one
/// annotation.
struct TraceLink {
    ProvisionRef provision;
    std::string instance;
    std::string via;

    bool operator==(const TraceLink&) const = default;
};

/// Instance declarations and relations as authored in the declaration
/// file. Relationship inference is manual: relations are declared, then
/// type-checked.
struct ModelDecls {
    std::vector<Instance> instances;
    std::vector<Relation> relations;
};

ModelDecls parse_model_decls(const std::string& input);

/// Assemble a content model. Binding of annotations to instances uses
/// explicit `supported_by` declarations plus `instance` hints on the
/// annotations; an annotation already claimed by a declaration is not
/// re-bound through its hint. Throws ValidationError on any model error
/// (unknown annotation id, kind-typing violation, duplicate instance
/// name, self-loop, ...).
ContentModel build_model(std::vector<AnnotationSet> sets, const ModelDecls& decls,
                         const LegalDocument& doc);

/// Model consistency diagnostics.
/// Errors: dangling relation endpoints or annotation ids, empty
/// supported_by, duplicate ids or normalized names, self-loops, duplicate
/// (kind, from, to) relations, kind-typing violations, source corpus
/// mismatch.
/// Warnings: criterion instances qualifying nothing; system-level
/// controls with neither an Addresses nor a Refines edge; provisions all
/// of whose annotations are bound to no instance.
std::vector<Diagnostic> check_model(const ContentModel& model);

/// Serialized bundle: the corpus document travels with the model so trace
/// queries need no further inputs.
struct ModelBundle {
    LegalDocument document;
    ContentModel model;

    bool operator==(const ModelBundle&) const = default;
};

std::string serialize_model(const ModelBundle& bundle);
ModelBundle parse_model(const std::string& input);

/// Partition of instances by abstraction level, in declaration order.
struct SpecDerivation {
    std::vector<Instance> requirements;
    std::vector<Instance> components;
};

/// Throws ValidationError when check_model reports errors.
SpecDerivation derive_specs(const ContentModel& model);

struct TracedComponent {
    std::string instance;
    bool indirect = false;  // reached via a Refines edge, not a direct annotation

    bool operator==(const TracedComponent&) const = default;
};

struct TraceForwardResult {
    std::vector<std::string> requirements;  // instance ids, model order
    std::vector<TracedComponent> components;
};

/// Instances supported by any annotation inside `ref` (descendants
/// included), split by level, plus components reachable from the traced
/// requirements via reverse Refines edges (flagged indirect). Throws
/// ValidationError when the reference does not resolve.
TraceForwardResult trace_forward(const ContentModel& model, const LegalDocument& doc,
                                 const ProvisionRef& ref);

/// Distinct provisions of all annotations supporting the instance, in
/// document order. Never empty. Throws ValidationError for unknown ids.
std::vector<ProvisionRef> trace_backward(const ContentModel& model, const LegalDocument& doc,
                                         const std::string& instance_id);

/// All trace links of the model: one per (instance, supporting annotation).
std::vector<TraceLink> trace_links(const ContentModel& model);

/// rows = list_provisions(doc), columns = derive_specs order
/// (requirements then components); cell true iff trace_backward of the
/// column instance contains the row provision.
struct TraceMatrix {
    std::vector<ProvisionRef> rows;
    std::vector<std::string> columns;        // instance ids
    std::vector<std::string> column_names;   // instance names, same order
    std::vector<std::vector<bool>> cells;
};

TraceMatrix trace_matrix(const ContentModel& model, const LegalDocument& doc);

/// CSV form of the matrix: header row of instance names, first column
/// provision refs, cells 1/0.
std::string trace_matrix_csv(const TraceMatrix& matrix);

struct CoverageReport {
    std::vector<ProvisionRef> covered;
    std::vector<ProvisionRef> uncovered;
    double ratio = 0.0;
};

/// Partition of body-text provisions by presence of at least one
/// annotation bound to an instance.
CoverageReport coverage(const ContentModel& model, const LegalDocument& doc);

}  // namespace regtrace
