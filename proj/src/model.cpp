#include "regtrace/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "json.hpp"
#include "regtrace/text.hpp"

namespace regtrace {

namespace {

using nlohmann::ordered_json;

std::string json_string(const ordered_json& obj, const char* key, const std::string& where,
                        bool required = true) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        if (required) throw ParseError(where + ": missing required field \"" + key + "\"");
        return {};
    }
    if (!it->is_string()) throw ParseError(where + ": field \"" + key + "\" must be a string");
    return it->get<std::string>();
}

std::vector<std::string> json_string_list(const ordered_json& obj, const char* key,
                                          const std::string& where, bool required) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        if (required) throw ParseError(where + ": missing required field \"" + key + "\"");
        return {};
    }
    if (!it->is_array()) throw ParseError(where + ": field \"" + key + "\" must be an array");
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string()) throw ParseError(where + ": field \"" + key + "\" must hold strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

Instance parse_instance(const ordered_json& ji) {
    Instance inst;
    inst.id = json_string(ji, "id", "instance");
    const std::string where = "instance " + inst.id;
    inst.name = json_string(ji, "name", where);
    inst.kind = concept_from_tag(json_string(ji, "concept", where));
    inst.level = level_from_tag(json_string(ji, "level", where));
    inst.supported_by = json_string_list(ji, "supported_by", where, true);
    return inst;
}

Relation parse_relation(const ordered_json& jr) {
    Relation rel;
    rel.kind = relation_from_tag(json_string(jr, "kind", "relation"));
    rel.from = json_string(jr, "from", "relation");
    rel.to = json_string(jr, "to", "relation");
    rel.supported_by = json_string_list(jr, "supported_by", "relation", false);
    rel.note = json_string(jr, "note", "relation", false);
    return rel;
}

ordered_json instance_json(const Instance& inst) {
    ordered_json ji;
    ji["id"] = inst.id;
    ji["name"] = inst.name;
    ji["concept"] = std::string(concept_tag(inst.kind));
    ji["level"] = std::string(level_tag(inst.level));
    ji["supported_by"] = inst.supported_by;
    return ji;
}

ordered_json relation_json(const Relation& rel) {
    ordered_json jr;
    jr["kind"] = std::string(relation_tag(rel.kind));
    jr["from"] = rel.from;
    jr["to"] = rel.to;
    if (!rel.supported_by.empty()) jr["supported_by"] = rel.supported_by;
    if (!rel.note.empty()) jr["note"] = rel.note;
    return jr;
}

ordered_json annotation_set_json(const AnnotationSet& set) {
    return ordered_json::parse(serialize_annotations(set));
}

AnnotationSet annotation_set_from_json(const ordered_json& j) {
    return parse_annotation_set(j.dump());
}

/// The rule a relation kind imposes on its endpoints, as diagnostic text.
std::string typing_rule(RelationKind kind) {
    switch (kind) {
        case RelationKind::Addresses:
            return "addresses requires control -> target";
        case RelationKind::Qualifies:
            return "qualifies requires criterion -> control or target";
        case RelationKind::DependsOn:
            return "depends_on requires control -> control";
        case RelationKind::Refines:
            return "refines requires system level -> requirements level";
    }
    return {};
}

bool relation_well_typed(RelationKind kind, const Instance& from, const Instance& to) {
    switch (kind) {
        case RelationKind::Addresses:
            return from.kind == ConceptKind::ComplianceControl &&
                   to.kind == ConceptKind::TargetOfRegulation;
        case RelationKind::Qualifies:
            return from.kind == ConceptKind::Criterion && is_legal_object(to.kind);
        case RelationKind::DependsOn:
            return from.kind == ConceptKind::ComplianceControl &&
                   to.kind == ConceptKind::ComplianceControl;
        case RelationKind::Refines:
            return from.level == AbstractionLevel::System &&
                   to.level == AbstractionLevel::Requirements;
    }
    return false;
}

}  // namespace

std::string_view relation_tag(RelationKind kind) {
    switch (kind) {
        case RelationKind::Addresses: return "addresses";
        case RelationKind::Qualifies: return "qualifies";
        case RelationKind::DependsOn: return "depends_on";
        case RelationKind::Refines: return "refines";
    }
    return "";
}

RelationKind relation_from_tag(std::string_view tag) {
    if (tag == "addresses") return RelationKind::Addresses;
    if (tag == "qualifies") return RelationKind::Qualifies;
    if (tag == "depends_on") return RelationKind::DependsOn;
    if (tag == "refines") return RelationKind::Refines;
    throw ParseError("unknown relation kind tag: \"" + std::string(tag) + "\"");
}

const Instance* ContentModel::find_instance(std::string_view id) const {
    for (const auto& inst : instances) {
        if (inst.id == id) return &inst;
    }
    return nullptr;
}

const Annotation* ContentModel::find_annotation(std::string_view id) const {
    for (const auto& set : sources) {
        for (const auto& a : set.annotations) {
            if (a.id == id) return &a;
        }
    }
    return nullptr;
}

ModelDecls parse_model_decls(const std::string& input) {
    ordered_json root;
    try {
        root = ordered_json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model declarations: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("model declarations: top-level value must be an object");

    ModelDecls decls;
    if (const auto it = root.find("instances"); it != root.end()) {
        for (const auto& ji : *it) decls.instances.push_back(parse_instance(ji));
    }
    if (const auto it = root.find("relations"); it != root.end()) {
        for (const auto& jr : *it) decls.relations.push_back(parse_relation(jr));
    }
    return decls;
}

ContentModel build_model(std::vector<AnnotationSet> sets, const ModelDecls& decls,
                         const LegalDocument& doc) {
    for (const auto& set : sets) {
        const auto diags = validate_annotations(set, doc);
        if (has_errors(diags)) {
            for (const auto& d : diags) {
                if (d.severity == Severity::Error) {
                    throw ValidationError("annotation set \"" + set.author + "\": " + to_string(d));
                }
            }
        }
    }

    ContentModel model;
    model.corpus_id = doc.id;
    model.sources = std::move(sets);
    model.instances = decls.instances;
    model.relations = decls.relations;

    // Annotation ids must be unambiguous across source sets.
    std::set<std::string> annotation_ids;
    for (const auto& set : model.sources) {
        for (const auto& a : set.annotations) {
            if (!annotation_ids.insert(a.id).second) {
                throw ValidationError("annotation id \"" + a.id +
                                      "\" appears in more than one source set");
            }
        }
    }

    // Bind hinted annotations to declared instances by normalized name.
    // Declarations win: an annotation explicitly claimed by any
    // declaration is not re-bound through its hint.
    std::set<std::string> declared;
    for (const auto& inst : model.instances) {
        declared.insert(inst.supported_by.begin(), inst.supported_by.end());
    }
    std::map<std::string, Instance*> by_name;
    for (auto& inst : model.instances) {
        by_name.emplace(normalize_name(inst.name), &inst);
    }
    for (const auto& set : model.sources) {
        for (const auto& a : set.annotations) {
            if (a.instance_hint.empty() || declared.contains(a.id)) continue;
            const auto it = by_name.find(normalize_name(a.instance_hint));
            if (it == by_name.end()) continue;  // unbound; surfaces as a coverage warning
            auto& ids = it->second->supported_by;
            if (std::find(ids.begin(), ids.end(), a.id) == ids.end()) ids.push_back(a.id);
        }
    }

    const auto diags = check_model(model);
    for (const auto& d : diags) {
        if (d.severity == Severity::Error) throw ValidationError(to_string(d));
    }
    return model;
}

std::vector<Diagnostic> check_model(const ContentModel& model) {
    std::vector<Diagnostic> diags;
    const auto error = [&](const std::string& subject, const std::string& message) {
        diags.push_back({Severity::Error, subject, message});
    };
    const auto warning = [&](const std::string& subject, const std::string& message) {
        diags.push_back({Severity::Warning, subject, message});
    };

    std::set<std::string> annotation_ids;
    for (const auto& set : model.sources) {
        if (set.corpus_id != model.corpus_id) {
            error(set.author, "source annotation set is for corpus \"" + set.corpus_id +
                                  "\" but model is for \"" + model.corpus_id + "\"");
        }
        for (const auto& a : set.annotations) annotation_ids.insert(a.id);
    }

    std::set<std::string> instance_ids;
    std::map<std::string, std::string> names;  // normalized name -> instance id
    for (const auto& inst : model.instances) {
        if (!instance_ids.insert(inst.id).second) {
            error(inst.id, "duplicate instance id");
            continue;
        }
        if (inst.name.empty()) {
            error(inst.id, "instance name must be non-empty");
        } else {
            const auto [it, fresh] = names.emplace(normalize_name(inst.name), inst.id);
            if (!fresh) {
                error(inst.id, "duplicate instance name \"" + inst.name + "\" (also used by " +
                                   it->second + ")");
            }
        }
        if (inst.supported_by.empty()) {
            error(inst.id, "instance has no supporting annotations");
        }
        for (const auto& aid : inst.supported_by) {
            if (!annotation_ids.contains(aid)) {
                error(inst.id, "unknown annotation id \"" + aid + "\" in supported_by");
            }
        }
    }

    std::set<std::tuple<RelationKind, std::string, std::string>> edges;
    for (const auto& rel : model.relations) {
        const std::string label =
            std::string(relation_tag(rel.kind)) + " " + rel.from + " -> " + rel.to;
        const Instance* from = model.find_instance(rel.from);
        const Instance* to = model.find_instance(rel.to);
        if (!from || !to) {
            error(label, std::string("relation endpoint does not exist: ") +
                             (!from ? rel.from : rel.to));
            continue;
        }
        if (rel.from == rel.to) {
            error(label, "self-loop relation");
            continue;
        }
        if (!edges.emplace(rel.kind, rel.from, rel.to).second) {
            error(label, "duplicate relation");
            continue;
        }
        if (!relation_well_typed(rel.kind, *from, *to)) {
            error(label, "kind-typing violation: " + typing_rule(rel.kind) + ", got " +
                             std::string(concept_tag(from->kind)) + "/" +
                             std::string(level_tag(from->level)) + " -> " +
                             std::string(concept_tag(to->kind)) + "/" +
                             std::string(level_tag(to->level)));
        }
        for (const auto& aid : rel.supported_by) {
            if (!annotation_ids.contains(aid)) {
                error(label, "unknown annotation id \"" + aid + "\" in supported_by");
            }
        }
    }

    // Structural warnings. Criteria should qualify something; system-level
    // controls should address a target or refine a requirement.
    for (const auto& inst : model.instances) {
        if (inst.kind == ConceptKind::Criterion) {
            bool qualifies = false;
            for (const auto& rel : model.relations) {
                if (rel.kind == RelationKind::Qualifies && rel.from == inst.id) qualifies = true;
            }
            if (!qualifies) {
                warning(inst.id, "criterion \"" + inst.name + "\" qualifies no control or target");
            }
        }
        if (inst.kind == ConceptKind::ComplianceControl &&
            inst.level == AbstractionLevel::System) {
            bool anchored = false;
            for (const auto& rel : model.relations) {
                if (rel.from == inst.id &&
                    (rel.kind == RelationKind::Addresses || rel.kind == RelationKind::Refines)) {
                    anchored = true;
                }
            }
            if (!anchored) {
                warning(inst.id, "system-level control \"" + inst.name +
                                     "\" neither addresses a target nor refines a requirement");
            }
        }
    }

    // Provisions whose annotations are all unbound: annotated text the
    // model does not represent.
    std::set<std::string> bound;
    for (const auto& inst : model.instances) {
        bound.insert(inst.supported_by.begin(), inst.supported_by.end());
    }
    std::map<ProvisionRef, bool> provision_bound;  // ref -> any annotation bound
    for (const auto& set : model.sources) {
        for (const auto& a : set.annotations) {
            auto [it, fresh] = provision_bound.emplace(a.span.provision, false);
            if (bound.contains(a.id)) it->second = true;
        }
    }
    for (const auto& [ref, any_bound] : provision_bound) {
        if (!any_bound) {
            warning(ref.str(), "provision carries annotations but none is bound to an instance");
        }
    }

    return diags;
}

std::string serialize_model(const ModelBundle& bundle) {
    ordered_json root;
    root["document"] = ordered_json::parse(serialize_corpus(bundle.document));
    root["annotation_sets"] = ordered_json::array();
    for (const auto& set : bundle.model.sources) {
        root["annotation_sets"].push_back(annotation_set_json(set));
    }
    root["instances"] = ordered_json::array();
    for (const auto& inst : bundle.model.instances) root["instances"].push_back(instance_json(inst));
    root["relations"] = ordered_json::array();
    for (const auto& rel : bundle.model.relations) root["relations"].push_back(relation_json(rel));
    return root.dump(2) + "\n";
}

ModelBundle parse_model(const std::string& input) {
    ordered_json root;
    try {
        root = ordered_json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model: ") + e.what());
    }
    if (!root.is_object() || !root.contains("document")) {
        throw ParseError("model: missing \"document\" object");
    }
    ModelBundle bundle;
    bundle.document = parse_corpus(root["document"].dump());
    bundle.model.corpus_id = bundle.document.id;
    if (const auto it = root.find("annotation_sets"); it != root.end()) {
        for (const auto& js : *it) bundle.model.sources.push_back(annotation_set_from_json(js));
    }
    if (const auto it = root.find("instances"); it != root.end()) {
        for (const auto& ji : *it) bundle.model.instances.push_back(parse_instance(ji));
    }
    if (const auto it = root.find("relations"); it != root.end()) {
        for (const auto& jr : *it) bundle.model.relations.push_back(parse_relation(jr));
    }
    return bundle;
}

SpecDerivation derive_specs(const ContentModel& model) {
    const auto diags = check_model(model);
    if (has_errors(diags)) {
        for (const auto& d : diags) {
            if (d.severity == Severity::Error) {
                throw ValidationError("cannot derive specifications, model has errors: " +
                                      to_string(d));
            }
        }
    }
    SpecDerivation out;
    for (const auto& inst : model.instances) {
        (inst.level == AbstractionLevel::Requirements ? out.requirements : out.components)
            .push_back(inst);
    }
    return out;
}

TraceForwardResult trace_forward(const ContentModel& model, const LegalDocument& doc,
                                 const ProvisionRef& ref) {
    resolve(doc, ref);  // throws when the reference does not name a node

    std::set<std::string> inside;  // annotation ids within ref
    for (const auto& set : model.sources) {
        for (const auto& a : set.annotations) {
            if (ref.contains(a.span.provision)) inside.insert(a.id);
        }
    }

    TraceForwardResult result;
    std::set<std::string> direct_components;
    std::set<std::string> traced_requirements;
    for (const auto& inst : model.instances) {
        const bool supported = std::any_of(inst.supported_by.begin(), inst.supported_by.end(),
                                           [&](const std::string& id) { return inside.contains(id); });
        if (!supported) continue;
        if (inst.level == AbstractionLevel::Requirements) {
            result.requirements.push_back(inst.id);
            traced_requirements.insert(inst.id);
        } else {
            result.components.push_back({inst.id, false});
            direct_components.insert(inst.id);
        }
    }

    // Components realizing the traced requirements, via reverse Refines.
    std::set<std::string> indirect;
    for (const auto& rel : model.relations) {
        if (rel.kind == RelationKind::Refines && traced_requirements.contains(rel.to) &&
            !direct_components.contains(rel.from)) {
            indirect.insert(rel.from);
        }
    }
    for (const auto& inst : model.instances) {
        if (indirect.contains(inst.id)) result.components.push_back({inst.id, true});
    }
    return result;
}

std::vector<ProvisionRef> trace_backward(const ContentModel& model, const LegalDocument& doc,
                                         const std::string& instance_id) {
    const Instance* inst = model.find_instance(instance_id);
    if (!inst) throw ValidationError("unknown instance id \"" + instance_id + "\"");

    std::set<ProvisionRef> provisions;
    for (const auto& aid : inst->supported_by) {
        const Annotation* a = model.find_annotation(aid);
        if (a) provisions.insert(a->span.provision);
    }
    std::vector<ProvisionRef> ordered;
    for (const auto& ref : list_provisions(doc)) {
        if (provisions.erase(ref)) ordered.push_back(ref);
    }
    // Annotations may sit on nodes without their own row (none in practice,
    // since spans require body text); keep any stragglers deterministic.
    for (const auto& ref : provisions) ordered.push_back(ref);
    return ordered;
}

std::vector<TraceLink> trace_links(const ContentModel& model) {
    std::vector<TraceLink> links;
    for (const auto& inst : model.instances) {
        for (const auto& aid : inst.supported_by) {
            const Annotation* a = model.find_annotation(aid);
            if (a) links.push_back({a->span.provision, inst.id, aid});
        }
    }
    return links;
}

TraceMatrix trace_matrix(const ContentModel& model, const LegalDocument& doc) {
    TraceMatrix matrix;
    matrix.rows = list_provisions(doc);
    const SpecDerivation specs = derive_specs(model);
    std::vector<const Instance*> order;
    for (const auto& inst : specs.requirements) order.push_back(&inst);
    for (const auto& inst : specs.components) order.push_back(&inst);
    for (const Instance* inst : order) {
        matrix.columns.push_back(inst->id);
        matrix.column_names.push_back(inst->name);
    }

    std::map<std::string, std::set<ProvisionRef>> supports;
    for (const Instance* inst : order) {
        auto& refs = supports[inst->id];
        for (const auto& aid : inst->supported_by) {
            if (const Annotation* a = model.find_annotation(aid)) refs.insert(a->span.provision);
        }
    }
    for (const auto& row : matrix.rows) {
        std::vector<bool> cells;
        cells.reserve(order.size());
        for (const Instance* inst : order) {
            cells.push_back(supports[inst->id].contains(row));
        }
        matrix.cells.push_back(std::move(cells));
    }
    return matrix;
}

std::string trace_matrix_csv(const TraceMatrix& matrix) {
    const auto csv_field = [](const std::string& value) {
        if (value.find_first_of(",\"\n") == std::string::npos) return value;
        std::string quoted = "\"";
        for (char c : value) {
            if (c == '"') quoted += "\"\"";
            else quoted.push_back(c);
        }
        return quoted + "\"";
    };
    std::string out = "provision";
    for (const auto& name : matrix.column_names) out += "," + csv_field(name);
    out += "\n";
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        out += csv_field(matrix.rows[r].str());
        for (bool cell : matrix.cells[r]) out += cell ? ",1" : ",0";
        out += "\n";
    }
    return out;
}

CoverageReport coverage(const ContentModel& model, const LegalDocument& doc) {
    std::set<std::string> bound;
    for (const auto& inst : model.instances) {
        bound.insert(inst.supported_by.begin(), inst.supported_by.end());
    }
    std::set<ProvisionRef> covered_refs;
    for (const auto& set : model.sources) {
        for (const auto& a : set.annotations) {
            if (bound.contains(a.id)) covered_refs.insert(a.span.provision);
        }
    }
    CoverageReport report;
    for (const auto& ref : list_provisions(doc)) {
        (covered_refs.contains(ref) ? report.covered : report.uncovered).push_back(ref);
    }
    const std::size_t total = report.covered.size() + report.uncovered.size();
    report.ratio = total == 0 ? 0.0 : static_cast<double>(report.covered.size()) / total;
    return report;
}

}  // namespace regtrace
