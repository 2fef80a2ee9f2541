#include "regtrace/corpus.hpp"

#include <cctype>
#include <set>
#include <utility>

#include "json.hpp"
#include "regtrace/errors.hpp"
#include "regtrace/text.hpp"

namespace regtrace {

namespace {

using nlohmann::ordered_json;

// Labels appear inside the reference grammar, so the delimiter characters
// are reserved.
void check_label(const std::string& label, const std::string& what) {
    if (label.empty()) throw ParseError(what + " label must be non-empty");
    for (char c : label) {
        if (c == ':' || c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) {
            throw ParseError(what + " label \"" + label + "\" contains a reserved character");
        }
    }
}

const ordered_json& require(const ordered_json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + ": missing required field \"" + key + "\"");
    return *it;
}

std::string get_string(const ordered_json& obj, const char* key, const std::string& where) {
    const auto& value = require(obj, key, where);
    if (!value.is_string()) throw ParseError(where + ": field \"" + key + "\" must be a string");
    return value.get<std::string>();
}

std::string get_string_or(const ordered_json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) return {};
    if (!it->is_string()) throw ParseError(where + ": field \"" + key + "\" must be a string");
    return it->get<std::string>();
}

}  // namespace

ProvisionRef ProvisionRef::parse(std::string_view text) {
    const auto bad = [&]() -> ParseError {
        return ParseError("malformed provision reference: \"" + std::string(text) + "\"");
    };
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0) throw bad();
    ProvisionRef ref;
    ref.document = std::string(text.substr(0, colon));
    std::string_view rest = text.substr(colon + 1);
    if (!rest.starts_with("Art")) throw bad();
    rest.remove_prefix(3);

    const std::size_t open = rest.find('(');
    const std::string_view article = rest.substr(0, open);
    if (article.empty()) throw bad();
    ref.article = std::string(article);
    if (open == std::string_view::npos) return ref;
    rest.remove_prefix(open);

    // One or two parenthesised labels.
    for (std::string* part : {&ref.paragraph, &ref.point}) {
        if (rest.empty()) return ref;
        if (rest.front() != '(') throw bad();
        const std::size_t close = rest.find(')');
        if (close == std::string_view::npos || close < 2) throw bad();
        *part = std::string(rest.substr(1, close - 1));
        rest.remove_prefix(close + 1);
    }
    if (!rest.empty()) throw bad();
    return ref;
}

std::string ProvisionRef::str() const {
    std::string out = document + ":Art" + article;
    if (!paragraph.empty()) out += "(" + paragraph + ")";
    if (!point.empty()) out += "(" + point + ")";
    return out;
}

bool ProvisionRef::contains(const ProvisionRef& other) const {
    if (document != other.document || article != other.article) return false;
    if (!paragraph.empty() && paragraph != other.paragraph) return false;
    if (!point.empty() && point != other.point) return false;
    return true;
}

std::string_view ProvisionNode::body_text() const {
    if (point) return point->text;
    if (paragraph) return paragraph->text;
    return {};
}

LegalDocument parse_corpus(const std::string& input) {
    ordered_json root;
    try {
        root = ordered_json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("corpus: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("corpus: top-level value must be an object");

    LegalDocument doc;
    doc.id = get_string(root, "id", "corpus");
    if (doc.id.empty()) throw ParseError("corpus: document id must be non-empty");
    if (doc.id.find(':') != std::string::npos) {
        throw ParseError("corpus: document id \"" + doc.id + "\" must not contain ':'");
    }
    doc.title = get_string_or(root, "title", "corpus");

    std::set<std::string> article_numbers;
    for (const auto& jart : require(root, "articles", "corpus")) {
        Article article;
        article.number = get_string(jart, "number", "article");
        check_label(article.number, "article");
        if (!article_numbers.insert(article.number).second) {
            throw ParseError("corpus: duplicate article number \"" + article.number + "\"");
        }
        article.title = get_string_or(jart, "title", "article " + article.number);

        std::set<std::string> paragraph_numbers;
        const auto jpars = jart.find("paragraphs");
        for (const auto& jpar : jpars == jart.end() ? ordered_json::array() : *jpars) {
            Paragraph paragraph;
            const std::string where = "article " + article.number;
            paragraph.number = get_string(jpar, "number", where);
            check_label(paragraph.number, "paragraph");
            if (!paragraph_numbers.insert(paragraph.number).second) {
                throw ParseError("corpus: duplicate paragraph number \"" + paragraph.number +
                                 "\" in article " + article.number);
            }
            paragraph.text = get_string_or(jpar, "text", where);

            std::set<std::string> point_letters;
            const auto jpoints = jpar.find("points");
            for (const auto& jpoint : jpoints == jpar.end() ? ordered_json::array() : *jpoints) {
                Point point;
                const std::string pwhere = where + "(" + paragraph.number + ")";
                point.letter = get_string(jpoint, "letter", pwhere);
                check_label(point.letter, "point");
                if (!point_letters.insert(point.letter).second) {
                    throw ParseError("corpus: duplicate point letter \"" + point.letter + "\" in " +
                                     pwhere);
                }
                point.text = get_string(jpoint, "text", pwhere);
                if (point.text.empty()) {
                    throw ParseError("corpus: point " + pwhere + "(" + point.letter +
                                     ") must have non-empty text");
                }
                paragraph.points.push_back(std::move(point));
            }
            if (paragraph.text.empty() && paragraph.points.empty()) {
                throw ParseError("corpus: paragraph " + where + "(" + paragraph.number +
                                 ") has neither body text nor points");
            }
            article.paragraphs.push_back(std::move(paragraph));
        }
        doc.articles.push_back(std::move(article));
    }
    return doc;
}

std::string serialize_corpus(const LegalDocument& doc) {
    ordered_json root;
    root["id"] = doc.id;
    root["title"] = doc.title;
    root["articles"] = ordered_json::array();
    for (const auto& article : doc.articles) {
        ordered_json jart;
        jart["number"] = article.number;
        jart["title"] = article.title;
        jart["paragraphs"] = ordered_json::array();
        for (const auto& paragraph : article.paragraphs) {
            ordered_json jpar;
            jpar["number"] = paragraph.number;
            jpar["text"] = paragraph.text;
            if (!paragraph.points.empty()) {
                jpar["points"] = ordered_json::array();
                for (const auto& point : paragraph.points) {
                    jpar["points"].push_back({{"letter", point.letter}, {"text", point.text}});
                }
            }
            jart["paragraphs"].push_back(std::move(jpar));
        }
        root["articles"].push_back(std::move(jart));
    }
    return root.dump(2) + "\n";
}

ProvisionNode resolve(const LegalDocument& doc, const ProvisionRef& ref) {
    if (ref.document != doc.id) {
        throw ValidationError("document mismatch: reference names \"" + ref.document +
                              "\" but document is \"" + doc.id + "\"");
    }
    ProvisionNode node;
    for (const auto& article : doc.articles) {
        if (article.number == ref.article) {
            node.article = &article;
            break;
        }
    }
    if (!node.article) throw ValidationError("unknown article in " + ref.str());
    if (ref.paragraph.empty()) return node;

    for (const auto& paragraph : node.article->paragraphs) {
        if (paragraph.number == ref.paragraph) {
            node.paragraph = &paragraph;
            break;
        }
    }
    if (!node.paragraph) throw ValidationError("unknown paragraph in " + ref.str());
    if (ref.point.empty()) return node;

    for (const auto& point : node.paragraph->points) {
        if (point.letter == ref.point) {
            node.point = &point;
            break;
        }
    }
    if (!node.point) throw ValidationError("unknown point in " + ref.str());
    return node;
}

std::string slice(const LegalDocument& doc, const Span& span) {
    const ProvisionNode node = resolve(doc, span.provision);
    const std::string_view body = node.body_text();
    if (body.empty()) {
        throw ValidationError("provision " + span.provision.str() + " has no body text");
    }
    const std::size_t length = scalar_length(body);
    if (span.start >= span.end || span.end > length) {
        throw ValidationError("span [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                              ") out of bounds for " + span.provision.str() + " (length " +
                              std::to_string(length) + ")");
    }
    return std::string(scalar_slice(body, span.start, span.end));
}

std::vector<ProvisionRef> list_provisions(const LegalDocument& doc) {
    std::vector<ProvisionRef> refs;
    for (const auto& article : doc.articles) {
        for (const auto& paragraph : article.paragraphs) {
            if (!paragraph.text.empty()) {
                refs.push_back({doc.id, article.number, paragraph.number, ""});
            }
            for (const auto& point : paragraph.points) {
                refs.push_back({doc.id, article.number, paragraph.number, point.letter});
            }
        }
    }
    return refs;
}

}  // namespace regtrace
