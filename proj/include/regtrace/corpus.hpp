#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace regtrace {

// Hierarchical legal text: document -> article -> paragraph -> point.
// All labels (article numbers, paragraph numbers, point letters) are
// opaque strings; amended regulations use labels like "4a". Values are
// immutable after parsing and safe to share across threads.

struct Point {
    std::string letter;
    std::string text;

    bool operator==(const Point&) const = default;
};

struct Paragraph {
    std::string number;
    std::string text;  // may be empty when the paragraph only carries points
    std::vector<Point> points;

    bool operator==(const Paragraph&) const = default;
};

struct Article {
    std::string number;
    std::string title;
    std::vector<Paragraph> paragraphs;

    bool operator==(const Article&) const = default;
};

struct LegalDocument {
    std::string id;
    std::string title;
    std::vector<Article> articles;

    bool operator==(const LegalDocument&) const = default;
};

/// Address of one provision. Canonical text form:
///   DOC:ArtN | DOC:ArtN(P) | DOC:ArtN(P)(x)
struct ProvisionRef {
    std::string document;
    std::string article;
    std::string paragraph;  // empty = absent
    std::string point;      // empty = absent; non-empty requires paragraph

    /// Parse the canonical form. Throws ParseError on any deviation.
    static ProvisionRef parse(std::string_view text);
    std::string str() const;

    bool operator==(const ProvisionRef&) const = default;
    auto operator<=>(const ProvisionRef&) const = default;

    /// True when `this` names `other` or one of its descendants.
    bool contains(const ProvisionRef& other) const;
};

/// Character range inside one provision's body text. Offsets count
/// Unicode scalar values, 0-based, end exclusive.
struct Span {
    ProvisionRef provision;
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const Span&) const = default;
};

/// Resolved provision: borrowed pointers into a LegalDocument.
struct ProvisionNode {
    const Article* article = nullptr;
    const Paragraph* paragraph = nullptr;
    const Point* point = nullptr;

    /// Body text of the deepest resolved level. Articles have none;
    /// paragraphs may have none.
    std::string_view body_text() const;
    bool has_body_text() const { return !body_text().empty(); }
};

/// Parse a corpus document from its JSON file format. Validates the
/// hierarchy invariants (unique labels per scope, non-empty point text,
/// document id without ':'). Throws ParseError with position information
/// for syntax errors and label violations.
LegalDocument parse_corpus(const std::string& input);

/// Canonical JSON serialization; parse_corpus(serialize_corpus(doc)) == doc.
std::string serialize_corpus(const LegalDocument& doc);

/// Resolve a reference against a document. Throws ValidationError when the
/// document id differs or any component does not exist.
ProvisionNode resolve(const LegalDocument& doc, const ProvisionRef& ref);

/// Exact scalar-value substring [span.start, span.end) of the provision's
/// body text. Throws ValidationError for out-of-bounds spans and for
/// provisions without body text.
std::string slice(const LegalDocument& doc, const Span& span);

/// Every provision that carries body text, in depth-first document order.
std::vector<ProvisionRef> list_provisions(const LegalDocument& doc);

}  // namespace regtrace
