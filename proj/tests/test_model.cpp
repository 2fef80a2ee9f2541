#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "regtrace/model.hpp"
#include "test_support.hpp"

using namespace regtrace;
using testsupport::experiment_model;
using testsupport::fixture_annotations;
using testsupport::fixture_corpus;
using testsupport::full_model;
using testsupport::read_fixture;

namespace {

// A tiny self-contained corpus + annotation set for synthetic models.
const char* kMiniCorpus = R"js({"id": "D", "title": "mini", "articles": [
    {"number": "1", "paragraphs": [
        {"number": "1", "text": "alpha beta gamma delta epsilon"},
        {"number": "2", "text": "zeta eta theta iota kappa"}]},
    {"number": "2", "paragraphs": [
        {"number": "1", "text": "lambda mu nu xi omicron"}]}]})js";

AnnotationSet mini_annotations() {
    AnnotationSet set;
    set.corpus_id = "D";
    set.author = "mini";
    const auto add = [&](const char* id, const char* ref, std::size_t start, std::size_t end,
                         std::string quote, ConceptKind kind) {
        Annotation a;
        a.id = id;
        a.span = {ProvisionRef::parse(ref), start, end};
        a.quote = std::move(quote);
        a.kind = kind;
        set.annotations.push_back(std::move(a));
    };
    add("M1", "D:Art1(1)", 0, 5, "alpha", ConceptKind::TargetOfRegulation);
    add("M2", "D:Art1(1)", 6, 10, "beta", ConceptKind::ComplianceControl);
    add("M3", "D:Art1(2)", 0, 4, "zeta", ConceptKind::Criterion);
    add("M4", "D:Art2(1)", 0, 6, "lambda", ConceptKind::ComplianceControl);
    return set;
}

Instance make_instance(const char* id, const char* name, ConceptKind kind, AbstractionLevel level,
                       std::vector<std::string> supports) {
    Instance inst;
    inst.id = id;
    inst.name = name;
    inst.kind = kind;
    inst.level = level;
    inst.supported_by = std::move(supports);
    return inst;
}

}  // namespace

TEST_CASE("experiment model binds hints into declared instances") {
    const LegalDocument doc = fixture_corpus();
    const ContentModel model = experiment_model(doc);
    CHECK(model.instances.size() == 8);

    const Instance* c2 = model.find_instance("C2");
    REQUIRE(c2 != nullptr);
    // A15.1 is declared; A15.3 and A15.4 join through their hints.
    CHECK(c2->supported_by == std::vector<std::string>{"A15.1", "A15.3", "A15.4"});

    const Instance* x1 = model.find_instance("X1");
    REQUIRE(x1 != nullptr);
    CHECK(x1->supported_by == std::vector<std::string>{"A13.5", "A15.5"});
}

TEST_CASE("gold model has 28 instances split 15/13") {
    const LegalDocument doc = fixture_corpus();
    const ContentModel model = full_model(doc);
    CHECK(model.instances.size() == 28);
    const SpecDerivation specs = derive_specs(model);
    CHECK(specs.requirements.size() == 15);
    CHECK(specs.components.size() == 13);
    CHECK(specs.requirements.front().name == "processing lawfullness");
    CHECK(specs.components.front().name == "processing purpose management");
}

TEST_CASE("single annotation, single instance builds a one-node model") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    ModelDecls decls;
    decls.instances.push_back(make_instance("I1", "alpha handler", ConceptKind::ComplianceControl,
                                            AbstractionLevel::System, {"M1"}));
    AnnotationSet set = mini_annotations();
    set.annotations.resize(1);
    const ContentModel model = build_model({set}, decls, doc);
    CHECK(model.instances.size() == 1);
    CHECK(model.relations.empty());
}

TEST_CASE("kind-typing violations are rejected with the rule named") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    ModelDecls decls;
    decls.instances.push_back(make_instance("K1", "some criterion", ConceptKind::Criterion,
                                            AbstractionLevel::Requirements, {"M3"}));
    decls.instances.push_back(make_instance("T1", "some target", ConceptKind::TargetOfRegulation,
                                            AbstractionLevel::System, {"M1"}));
    decls.relations.push_back({RelationKind::Addresses, "K1", "T1", {}, {}});
    try {
        build_model({mini_annotations()}, decls, doc);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("addresses requires control -> target") !=
              std::string::npos);
    }
}

TEST_CASE("build rejects unknown annotations, duplicate names, self-loops") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    const AnnotationSet set = mini_annotations();

    ModelDecls unknown;
    unknown.instances.push_back(make_instance("I1", "thing", ConceptKind::ComplianceControl,
                                              AbstractionLevel::System, {"NOPE"}));
    CHECK_THROWS_AS(build_model({set}, unknown, doc), ValidationError);

    ModelDecls duplicate;
    duplicate.instances.push_back(make_instance("I1", "Thing One", ConceptKind::ComplianceControl,
                                                AbstractionLevel::System, {"M2"}));
    duplicate.instances.push_back(make_instance("I2", "thing  one", ConceptKind::ComplianceControl,
                                                AbstractionLevel::System, {"M4"}));
    CHECK_THROWS_AS(build_model({set}, duplicate, doc), ValidationError);

    ModelDecls loop;
    loop.instances.push_back(make_instance("I1", "thing", ConceptKind::ComplianceControl,
                                           AbstractionLevel::System, {"M2"}));
    loop.relations.push_back({RelationKind::DependsOn, "I1", "I1", {}, {}});
    CHECK_THROWS_AS(build_model({set}, loop, doc), ValidationError);
}

TEST_CASE("gold fixture models check clean of errors") {
    const LegalDocument doc = fixture_corpus();
    for (const ContentModel& model : {experiment_model(doc), full_model(doc)}) {
        const auto diags = check_model(model);
        CHECK_FALSE(has_errors(diags));
    }
}

TEST_CASE("criterion without a qualifies edge draws a warning naming it") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    ModelDecls decls;
    decls.instances.push_back(make_instance("K1", "processing purposes", ConceptKind::Criterion,
                                            AbstractionLevel::Requirements, {"M3"}));
    const ContentModel model = build_model({mini_annotations()}, decls, doc);
    const auto diags = check_model(model);
    REQUIRE_FALSE(diags.empty());
    bool found = false;
    for (const auto& d : diags) {
        if (d.severity == Severity::Warning && d.subject == "K1" &&
            d.message.find("processing purposes") != std::string::npos) {
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("dangling relation endpoint is an error") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    ModelDecls decls;
    decls.instances.push_back(make_instance("I1", "thing", ConceptKind::ComplianceControl,
                                            AbstractionLevel::System, {"M2"}));
    decls.instances.push_back(make_instance("I2", "other", ConceptKind::ComplianceControl,
                                            AbstractionLevel::System, {"M4"}));
    decls.relations.push_back({RelationKind::DependsOn, "I1", "I2", {}, {}});
    ContentModel model = build_model({mini_annotations()}, decls, doc);
    model.instances.pop_back();  // I2 vanishes, relation dangles
    const auto diags = check_model(model);
    CHECK(has_errors(diags));
}

TEST_CASE("unbound annotations surface as a provision warning") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    ModelDecls decls;
    decls.instances.push_back(make_instance("I1", "thing", ConceptKind::ComplianceControl,
                                            AbstractionLevel::System, {"M2"}));
    const ContentModel model = build_model({mini_annotations()}, decls, doc);
    const auto diags = check_model(model);
    bool art12 = false, art21 = false;
    for (const auto& d : diags) {
        if (d.severity != Severity::Warning) continue;
        if (d.subject == "D:Art1(2)") art12 = true;
        if (d.subject == "D:Art2(1)") art21 = true;
    }
    CHECK(art12);  // M3 unbound
    CHECK(art21);  // M4 unbound
}

TEST_CASE("derive_specs partitions every instance exactly once") {
    const LegalDocument doc = fixture_corpus();
    for (const ContentModel& model : {experiment_model(doc), full_model(doc)}) {
        const SpecDerivation specs = derive_specs(model);
        CHECK(specs.requirements.size() + specs.components.size() == model.instances.size());
        std::set<std::string> seen;
        for (const auto& inst : specs.requirements) {
            CHECK(inst.level == AbstractionLevel::Requirements);
            CHECK(seen.insert(inst.id).second);
        }
        for (const auto& inst : specs.components) {
            CHECK(inst.level == AbstractionLevel::System);
            CHECK(seen.insert(inst.id).second);
        }
    }
}

TEST_CASE("derive_specs handles empty and one-sided models") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    const ContentModel empty = build_model({mini_annotations()}, {}, doc);
    const SpecDerivation none = derive_specs(empty);
    CHECK(none.requirements.empty());
    CHECK(none.components.empty());

    ModelDecls decls;
    decls.instances.push_back(make_instance("I1", "thing", ConceptKind::ComplianceControl,
                                            AbstractionLevel::System, {"M2"}));
    const SpecDerivation onesided = derive_specs(build_model({mini_annotations()}, decls, doc));
    CHECK(onesided.requirements.empty());
    CHECK(onesided.components.size() == 1);
}

TEST_CASE("derive_specs refuses models with errors") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    ContentModel model = build_model({mini_annotations()}, {}, doc);
    model.instances.push_back(make_instance("I1", "ghost", ConceptKind::ComplianceControl,
                                            AbstractionLevel::System, {"NOPE"}));
    CHECK_THROWS_AS(derive_specs(model), ValidationError);
}

TEST_CASE("forward trace of the consent provision finds requirement and component") {
    const LegalDocument doc = fixture_corpus();
    const ContentModel model = full_model(doc);
    const TraceForwardResult result =
        trace_forward(model, doc, ProvisionRef::parse("GDPR:Art4(11)"));
    CHECK(result.requirements == std::vector<std::string>{"R2", "R10", "R11"});
    REQUIRE(result.components.size() == 1);
    CHECK(result.components[0].instance == "C2");
    CHECK(model.find_instance("C2")->name == "consent management service");
    CHECK_FALSE(result.components[0].indirect);
}

TEST_CASE("forward trace of an unannotated provision is empty") {
    const LegalDocument doc = fixture_corpus();
    const ContentModel model = full_model(doc);
    const auto result = trace_forward(model, doc, ProvisionRef::parse("GDPR:Art15(1)(b)"));
    CHECK(result.requirements.empty());
    CHECK(result.components.empty());
}

TEST_CASE("whole-article trace unions its descendants") {
    const LegalDocument doc = fixture_corpus();
    const ContentModel model = full_model(doc);
    const auto whole = trace_forward(model, doc, ProvisionRef::parse("GDPR:Art6"));
    const auto pa = trace_forward(model, doc, ProvisionRef::parse("GDPR:Art6(1)(a)"));
    const auto pb = trace_forward(model, doc, ProvisionRef::parse("GDPR:Art6(1)(b)"));
    std::set<std::string> expected;
    // The article-level trace covers at least everything its points carry.
    for (const auto* r : {&pa, &pb}) {
        expected.insert(r->requirements.begin(), r->requirements.end());
        for (const auto& tc : r->components) expected.insert(tc.instance);
    }
    std::set<std::string> got(whole.requirements.begin(), whole.requirements.end());
    for (const auto& tc : whole.components) got.insert(tc.instance);
    for (const auto& id : expected) CHECK(got.contains(id));
    CHECK(pa.requirements.size() < whole.requirements.size());

    CHECK_THROWS_AS(trace_forward(model, doc, ProvisionRef::parse("GDPR:Art99")),
                    ValidationError);
}

TEST_CASE("refines edges pull components in as indirect results") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    ModelDecls decls;
    decls.instances.push_back(make_instance("R1", "retention requirement",
                                            ConceptKind::ComplianceControl,
                                            AbstractionLevel::Requirements, {"M2"}));
    decls.instances.push_back(make_instance("S1", "retention scheduler",
                                            ConceptKind::ComplianceControl,
                                            AbstractionLevel::System, {"M4"}));
    decls.relations.push_back({RelationKind::Refines, "S1", "R1", {}, {}});
    const ContentModel model = build_model({mini_annotations()}, decls, doc);

    // M2 sits in Art1(1): tracing it finds R1 directly and S1 indirectly.
    const auto result = trace_forward(model, doc, ProvisionRef::parse("D:Art1(1)"));
    CHECK(result.requirements == std::vector<std::string>{"R1"});
    REQUIRE(result.components.size() == 1);
    CHECK(result.components[0].instance == "S1");
    CHECK(result.components[0].indirect);

    // Tracing S1's own provision reports it directly, not twice.
    const auto direct = trace_forward(model, doc, ProvisionRef::parse("D:Art2(1)"));
    REQUIRE(direct.components.size() == 1);
    CHECK_FALSE(direct.components[0].indirect);
}

TEST_CASE("backward trace lists distinct provisions in document order") {
    const LegalDocument doc = fixture_corpus();
    const ContentModel model = full_model(doc);
    // C2 is supported from Art 6(1)(a) and Art 4(11); document order puts 4 first.
    const auto refs = trace_backward(model, doc, "C2");
    REQUIRE(refs.size() == 2);
    CHECK(refs[0].str() == "GDPR:Art4(11)");
    CHECK(refs[1].str() == "GDPR:Art6(1)(a)");

    for (const auto& inst : model.instances) {
        CHECK_FALSE(trace_backward(model, doc, inst.id).empty());
    }
    CHECK_THROWS_AS(trace_backward(model, doc, "ZZ"), ValidationError);
}

TEST_CASE("forward and backward traces agree") {
    const LegalDocument doc = fixture_corpus();
    for (const ContentModel& model : {experiment_model(doc), full_model(doc)}) {
        for (const auto& inst : model.instances) {
            for (const auto& ref : trace_backward(model, doc, inst.id)) {
                const auto forward = trace_forward(model, doc, ref);
                bool present =
                    std::find(forward.requirements.begin(), forward.requirements.end(), inst.id) !=
                    forward.requirements.end();
                for (const auto& tc : forward.components) {
                    present = present || tc.instance == inst.id;
                }
                CAPTURE(inst.id);
                CAPTURE(ref.str());
                CHECK(present);
            }
        }
    }
}

TEST_CASE("trace matrix rows line up with per-provision trace counts") {
    const LegalDocument doc = fixture_corpus();
    const ContentModel model = full_model(doc);
    const TraceMatrix matrix = trace_matrix(model, doc);
    REQUIRE(matrix.rows.size() == list_provisions(doc).size());
    REQUIRE(matrix.columns.size() == model.instances.size());

    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        const ProvisionRef& ref = matrix.rows[r];
        if (!ref.point.empty()) {  // leaves have no descendants to aggregate
            const auto forward = trace_forward(model, doc, ref);
            std::size_t direct = forward.requirements.size();
            for (const auto& tc : forward.components) {
                if (!tc.indirect) ++direct;
            }
            const std::size_t row_sum = static_cast<std::size_t>(
                std::count(matrix.cells[r].begin(), matrix.cells[r].end(), true));
            CHECK(row_sum == direct);
        }
    }

    // The consent provision row is non-empty.
    std::size_t consent_row = 0;
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        if (matrix.rows[r].str() == "GDPR:Art4(11)") consent_row = r;
    }
    CHECK(std::count(matrix.cells[consent_row].begin(), matrix.cells[consent_row].end(), true) > 0);
}

TEST_CASE("empty model yields an all-false matrix and zero coverage") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    const ContentModel model = build_model({mini_annotations()}, {}, doc);
    const TraceMatrix matrix = trace_matrix(model, doc);
    CHECK(matrix.columns.empty());
    for (const auto& row : matrix.cells) CHECK(row.empty());

    const CoverageReport report = coverage(model, doc);
    CHECK(report.covered.empty());
    CHECK(report.ratio == 0.0);
}

TEST_CASE("coverage partitions provisions and reports exact bounds") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    ModelDecls decls;
    decls.instances.push_back(make_instance("I1", "a", ConceptKind::ComplianceControl,
                                            AbstractionLevel::System, {"M1"}));
    decls.instances.push_back(make_instance("I2", "b", ConceptKind::ComplianceControl,
                                            AbstractionLevel::System, {"M3"}));
    decls.instances.push_back(make_instance("I3", "c", ConceptKind::ComplianceControl,
                                            AbstractionLevel::System, {"M4"}));
    const ContentModel full_coverage = build_model({mini_annotations()}, decls, doc);
    CHECK(coverage(full_coverage, doc).ratio == 1.0);

    const LegalDocument gdpr = fixture_corpus();
    const CoverageReport partial = coverage(experiment_model(gdpr), gdpr);
    CHECK(partial.ratio > 0.0);
    CHECK(partial.ratio < 1.0);
    CHECK(partial.covered.size() == 7);
    CHECK(partial.covered.size() + partial.uncovered.size() == 20);
}

TEST_CASE("model bundles round-trip through serialization") {
    const LegalDocument doc = fixture_corpus();
    for (const ContentModel& model : {experiment_model(doc), full_model(doc)}) {
        const ModelBundle bundle{doc, model};
        const ModelBundle back = parse_model(serialize_model(bundle));
        CHECK(back == bundle);
    }
}

TEST_CASE("trace links join provisions, instances, and annotations") {
    const LegalDocument doc = fixture_corpus();
    const ContentModel model = full_model(doc);
    const auto links = trace_links(model);
    std::size_t expected = 0;
    for (const auto& inst : model.instances) expected += inst.supported_by.size();
    CHECK(links.size() == expected);
    for (const auto& link : links) {
        const Annotation* a = model.find_annotation(link.via);
        REQUIRE(a != nullptr);
        CHECK(a->span.provision == link.provision);
    }
}

// Randomized kind-typing property: any single relation violating its rule
// must be flagged as an error.
TEST_CASE("random typing mutations are always rejected") {
    const LegalDocument doc = parse_corpus(kMiniCorpus);
    const AnnotationSet set = mini_annotations();
    std::mt19937 rng(1337);
    std::uniform_int_distribution<int> pick_kind(0, 3);
    std::uniform_int_distribution<int> pick_concept(0, 2);
    std::uniform_int_distribution<int> pick_level(0, 1);

    for (int round = 0; round < 500; ++round) {
        // Two instances with random concept/level, one relation of random kind.
        Instance a = make_instance("A", "instance a", static_cast<ConceptKind>(pick_concept(rng)),
                                   static_cast<AbstractionLevel>(pick_level(rng)), {"M1"});
        Instance b = make_instance("B", "instance b", static_cast<ConceptKind>(pick_concept(rng)),
                                   static_cast<AbstractionLevel>(pick_level(rng)), {"M2"});
        const auto kind = static_cast<RelationKind>(pick_kind(rng));

        ContentModel model;
        model.corpus_id = "D";
        model.sources = {set};
        model.instances = {a, b};
        model.relations = {{kind, "A", "B", {}, {}}};

        const bool well_typed = [&] {
            switch (kind) {
                case RelationKind::Addresses:
                    return a.kind == ConceptKind::ComplianceControl &&
                           b.kind == ConceptKind::TargetOfRegulation;
                case RelationKind::Qualifies:
                    return a.kind == ConceptKind::Criterion && is_legal_object(b.kind);
                case RelationKind::DependsOn:
                    return a.kind == ConceptKind::ComplianceControl &&
                           b.kind == ConceptKind::ComplianceControl;
                case RelationKind::Refines:
                    return a.level == AbstractionLevel::System &&
                           b.level == AbstractionLevel::Requirements;
            }
            return false;
        }();

        CAPTURE(round);
        CHECK(has_errors(check_model(model)) == !well_typed);
    }
}

TEST_CASE("declaration files parse relations with grounding") {
    const ModelDecls decls = parse_model_decls(read_fixture("experiment.decls.json"));
    CHECK(decls.instances.size() == 8);
    REQUIRE(decls.relations.size() == 3);
    CHECK(decls.relations[0].kind == RelationKind::Addresses);
    CHECK(decls.relations[0].supported_by == std::vector<std::string>{"A15.3"});
    CHECK_THROWS_AS(parse_model_decls("{\"instances\": [{\"id\": \"X\"}]}"), ParseError);
    CHECK_THROWS_AS(parse_model_decls("not json"), ParseError);
}

TEST_CASE("annotation ids must be unique across source sets") {
    const LegalDocument doc = fixture_corpus();
    const AnnotationSet gold = fixture_annotations("gold.ann.json", doc);
    CHECK_THROWS_AS(build_model({gold, gold}, {}, doc), ValidationError);
}
