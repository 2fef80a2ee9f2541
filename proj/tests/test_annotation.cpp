#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "regtrace/annotation.hpp"
#include "regtrace/errors.hpp"
#include "regtrace/text.hpp"
#include "test_support.hpp"

using namespace regtrace;
using testsupport::fixture_corpus;
using testsupport::read_fixture;

TEST_CASE("concept taxonomy has exactly the three kinds") {
    CHECK(concept_from_tag("target") == ConceptKind::TargetOfRegulation);
    CHECK(concept_from_tag("control") == ConceptKind::ComplianceControl);
    CHECK(concept_from_tag("criterion") == ConceptKind::Criterion);
    CHECK_THROWS_AS(concept_from_tag("other"), ParseError);

    CHECK(is_legal_object(ConceptKind::TargetOfRegulation));
    CHECK(is_legal_object(ConceptKind::ComplianceControl));
    CHECK_FALSE(is_legal_object(ConceptKind::Criterion));

    CHECK(concept_marker(ConceptKind::TargetOfRegulation) == "<<target>>");
    CHECK(concept_marker(ConceptKind::ComplianceControl) == "<<control>>");
    CHECK(concept_marker(ConceptKind::Criterion) == "<<criterion>>");
}

TEST_CASE("abstraction level tags") {
    CHECK(level_from_tag("requirements") == AbstractionLevel::Requirements);
    CHECK(level_from_tag("system") == AbstractionLevel::System);
    CHECK_THROWS_AS(level_from_tag("design"), ParseError);
}

TEST_CASE("gold annotation set loads with zero diagnostics") {
    const LegalDocument doc = fixture_corpus();
    const AnnotationSet set = parse_annotation_set(read_fixture("gold.ann.json"));
    CHECK(set.corpus_id == "GDPR");
    CHECK(set.annotations.size() == 10);
    CHECK(validate_annotations(set, doc).empty());

    const Annotation& a151 = set.annotations[5];
    CHECK(a151.id == "A15.1");
    CHECK(a151.quote == "obtain from the controller confirmation");
    CHECK(a151.kind == ConceptKind::ComplianceControl);
    CHECK(slice(doc, a151.span) == a151.quote);
}

TEST_CASE("overlapping and nested annotations are legal") {
    // The full-model set nests several spans inside the same provision.
    const LegalDocument doc = fixture_corpus();
    const AnnotationSet set = parse_annotation_set(read_fixture("approach.ann.json"));
    CHECK(validate_annotations(set, doc).empty());
}

TEST_CASE("empty annotation list loads as an empty set") {
    const LegalDocument doc = fixture_corpus();
    const AnnotationSet set =
        load_annotations(R"js({"corpus": "GDPR", "author": "x", "annotations": []})js", doc);
    CHECK(set.annotations.empty());
}

TEST_CASE("quote mismatch names both strings") {
    const LegalDocument doc = fixture_corpus();
    // Span actually covers "obtain from the controller" territory.
    const std::string input = R"js({"corpus": "GDPR", "author": "x", "annotations": [
        {"id": "A1", "provision": "GDPR:Art15(1)", "start": 41, "end": 69,
         "quote": "access to the personal data", "concept": "control"}]})js";
    const AnnotationSet set = parse_annotation_set(input);
    const auto diags = validate_annotations(set, doc);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Error);
    CHECK(diags[0].subject == "A1");
    CHECK(diags[0].message.find("access to the personal data") != std::string::npos);
    CHECK(diags[0].message.find("obtain from the controller") != std::string::npos);

    CHECK_THROWS_AS(load_annotations(input, doc), ValidationError);
}

TEST_CASE("duplicate ids, unknown provisions, and bad spans are diagnosed") {
    const LegalDocument doc = fixture_corpus();
    const std::string input = R"js({"corpus": "GDPR", "author": "x", "annotations": [
        {"id": "A13.1", "provision": "GDPR:Art13(1)", "start": 0, "end": 5,
         "quote": "Where", "concept": "target"},
        {"id": "A13.1", "provision": "GDPR:Art13(1)", "start": 0, "end": 5,
         "quote": "Where", "concept": "target"},
        {"id": "A2", "provision": "GDPR:Art99(1)", "start": 0, "end": 5,
         "quote": "xxxxx", "concept": "target"},
        {"id": "A3", "provision": "GDPR:Art13(1)", "start": 0, "end": 100000,
         "quote": "y", "concept": "target"},
        {"id": "A4", "provision": "GDPR:Art13", "start": 0, "end": 2,
         "quote": "Wh", "concept": "target"}]})js";
    const auto diags = validate_annotations(parse_annotation_set(input), doc);
    REQUIRE(diags.size() == 4);
    CHECK(diags[0].message == "duplicate annotation id");
    CHECK(diags[1].message.find("unknown article") != std::string::npos);
    CHECK(diags[2].message.find("out of bounds") != std::string::npos);
    CHECK(diags[3].message.find("no body text") != std::string::npos);
}

TEST_CASE("set for a different corpus is rejected") {
    const LegalDocument doc = fixture_corpus();
    const auto diags = validate_annotations(
        parse_annotation_set(R"js({"corpus": "CCPA", "author": "x", "annotations": []})js"), doc);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Error);
}

TEST_CASE("unknown concept tags fail at parse time") {
    CHECK_THROWS_AS(parse_annotation_set(R"js({"corpus": "GDPR", "annotations": [
        {"id": "A1", "provision": "GDPR:Art13(1)", "start": 0, "end": 5,
         "quote": "Where", "concept": "norm"}]})js"),
                    ParseError);
}

TEST_CASE("load(serialize(set)) == set for the fixture sets") {
    const LegalDocument doc = fixture_corpus();
    for (const char* name : {"gold.ann.json", "handout.ann.json", "approach.ann.json",
                             "i5.ann.json", "i9.ann.json", "i10.ann.json", "i11.ann.json",
                             "i12.ann.json"}) {
        CAPTURE(name);
        const AnnotationSet set = load_annotations(read_fixture(name), doc);
        CHECK(load_annotations(serialize_annotations(set), doc) == set);
    }
}

TEST_CASE("round-trip holds for randomly generated sets") {
    const LegalDocument doc = fixture_corpus();
    const auto provisions = list_provisions(doc);
    std::mt19937 rng(424242);
    std::uniform_int_distribution<std::size_t> pick_provision(0, provisions.size() - 1);
    std::uniform_int_distribution<int> pick_concept(0, 2);
    std::uniform_int_distribution<int> ann_count(0, 12);

    for (int round = 0; round < 100; ++round) {
        AnnotationSet set;
        set.corpus_id = "GDPR";
        set.author = "fuzz" + std::to_string(round);
        const int n = ann_count(rng);
        for (int i = 0; i < n; ++i) {
            const ProvisionRef& ref = provisions[pick_provision(rng)];
            const std::string_view body = resolve(doc, ref).body_text();
            const std::size_t length = scalar_length(body);
            std::uniform_int_distribution<std::size_t> pick_start(0, length - 1);
            const std::size_t start = pick_start(rng);
            std::uniform_int_distribution<std::size_t> pick_end(start + 1, length);
            Annotation a;
            a.id = "F" + std::to_string(i);
            a.span = {ref, start, pick_end(rng)};
            a.quote = slice(doc, a.span);
            a.kind = static_cast<ConceptKind>(pick_concept(rng));
            if (i % 3 == 0) a.instance_hint = "hinted instance";
            if (i % 5 == 0) a.note = "note \"quoted\" text";
            set.annotations.push_back(std::move(a));
        }
        CAPTURE(round);
        CHECK(load_annotations(serialize_annotations(set), doc) == set);
    }
}
