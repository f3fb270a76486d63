#include "bim2map/errors.hpp"
#include "bim2map/world_model.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace bim2map::wm {

namespace {

constexpr const char* kBot = "https://w3id.org/bot#";
constexpr const char* kBeo = "http://pi.pauwel.be/voc/buildingelement#";
constexpr const char* kProps = "http://example.org/props#";
constexpr const char* kInst = "http://example.org/inst#";
constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

bool is_iri(const std::string& s) { return s.find("://") != std::string::npos; }

std::string render_node(const std::string& id) {
    return is_iri(id) ? "<" + id + ">" : "inst:" + id;
}

std::string render_type(const std::string& t) {
    if (t == "Space") return "bot:Space";
    return is_iri(t) ? "<" + t + ">" : "beo:" + t;
}

std::string render_pred(const std::string& p) {
    if (p == pred::type) return "a";
    if (p == pred::adjacent) return "bot:adjacentElement";
    if (p == pred::contains) return "bot:containsElement";
    if (p == pred::has_sub_element) return "bot:hasSubElement";
    if (p == pred::has_geometry) return "props:hasGeometry";
    if (p == pred::has_material) return "props:hasMaterial";
    if (p == pred::is_static) return "props:isStatic";
    return "<" + p + ">";
}

int pred_rank(const std::string& p) {
    if (p == pred::type) return 0;
    if (p == pred::adjacent) return 1;
    if (p == pred::contains) return 2;
    if (p == pred::has_sub_element) return 3;
    if (p == pred::has_geometry) return 4;
    if (p == pred::has_material) return 5;
    if (p == pred::is_static) return 6;
    return 7;
}

std::string escape_literal(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out;
}

std::string render_object(const Triple& t) {
    switch (t.object_kind) {
    case ObjKind::Boolean: return t.object;
    case ObjKind::Literal: return "\"" + escape_literal(t.object) + "\"";
    case ObjKind::Node:
        return t.predicate == pred::type ? render_type(t.object) : render_node(t.object);
    }
    return t.object;
}

// ---- parsing ----------------------------------------------------------------

struct Tok {
    enum Kind { Iri, Pname, String, Bool, A, Dot, Semi, Comma, Prefix, End } kind = End;
    std::string text; // IRI content, "prefix:local", literal text, "true"/"false"
    int line = 1;
};

class TtlLexer {
public:
    explicit TtlLexer(const std::string& text) : text_(text) {}

    Tok next() {
        skip_ws();
        Tok t;
        t.line = line_;
        if (pos_ >= text_.size()) return t;
        char c = text_[pos_];
        if (c == '<') return lex_iri();
        if (c == '"') return lex_string();
        if (c == '.') {
            ++pos_;
            t.kind = Tok::Dot;
            return t;
        }
        if (c == ';') {
            ++pos_;
            t.kind = Tok::Semi;
            return t;
        }
        if (c == ',') {
            ++pos_;
            t.kind = Tok::Comma;
            return t;
        }
        if (c == '@') {
            std::size_t start = ++pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            std::string word = text_.substr(start, pos_ - start);
            if (word != "prefix") throw TurtleParseError("unknown directive @" + word, line_);
            t.kind = Tok::Prefix;
            return t;
        }
        return lex_name();
    }

    int line() const { return line_; }

private:
    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    Tok lex_iri() {
        Tok t;
        t.line = line_;
        t.kind = Tok::Iri;
        ++pos_; // <
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '>') {
            if (text_[pos_] == '\n') throw TurtleParseError("unterminated IRI", line_);
            ++pos_;
        }
        if (pos_ >= text_.size()) throw TurtleParseError("unterminated IRI", line_);
        t.text = text_.substr(start, pos_ - start);
        ++pos_; // >
        return t;
    }

    void append_codepoint(std::string& out, unsigned long cp) {
        if (cp <= 0x7F) {
            out += static_cast<char>(cp);
        } else if (cp <= 0x7FF) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp <= 0xFFFF) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    unsigned long read_hex(int digits) {
        unsigned long cp = 0;
        for (int i = 0; i < digits; ++i) {
            if (pos_ >= text_.size() || !std::isxdigit(static_cast<unsigned char>(text_[pos_])))
                throw TurtleParseError("bad unicode escape", line_);
            char c = text_[pos_++];
            cp = cp * 16 + static_cast<unsigned long>(
                               c <= '9' ? c - '0' : (c | 0x20) - 'a' + 10);
        }
        return cp;
    }

    Tok lex_string() {
        Tok t;
        t.line = line_;
        t.kind = Tok::String;
        ++pos_; // "
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '"') {
                ++pos_;
                return t;
            }
            if (c == '\n') throw TurtleParseError("unterminated string", line_);
            if (c == '\\') {
                ++pos_;
                if (pos_ >= text_.size()) break;
                char e = text_[pos_++];
                switch (e) {
                case '"': t.text += '"'; break;
                case '\\': t.text += '\\'; break;
                case 'n': t.text += '\n'; break;
                case 'r': t.text += '\r'; break;
                case 't': t.text += '\t'; break;
                case 'u': append_codepoint(t.text, read_hex(4)); break;
                case 'U': append_codepoint(t.text, read_hex(8)); break;
                default: throw TurtleParseError(std::string("bad escape \\") + e, line_);
                }
                continue;
            }
            t.text += c;
            ++pos_;
        }
        throw TurtleParseError("unterminated string", line_);
    }

    Tok lex_name() {
        Tok t;
        t.line = line_;
        std::size_t start = pos_;
        auto name_char = [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':';
        };
        while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
        if (pos_ == start) throw TurtleParseError("unexpected character", line_);
        std::string word = text_.substr(start, pos_ - start);
        if (word == "a") {
            t.kind = Tok::A;
            return t;
        }
        if (word == "true" || word == "false") {
            t.kind = Tok::Bool;
            t.text = word;
            return t;
        }
        if (word.find(':') == std::string::npos)
            throw TurtleParseError("expected a prefixed name, got '" + word + "'", line_);
        t.kind = Tok::Pname;
        t.text = word;
        return t;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

struct TtlParser {
    TtlLexer lx;
    Tok tok;
    std::map<std::string, std::string> prefixes;
    Graph g;

    explicit TtlParser(const std::string& text) : lx(text) { tok = lx.next(); }

    void advance() { tok = lx.next(); }

    std::string expand(const std::string& pname, int line) const {
        auto colon = pname.find(':');
        std::string prefix = pname.substr(0, colon);
        auto it = prefixes.find(prefix);
        if (it == prefixes.end())
            throw TurtleParseError("unknown prefix '" + prefix + ":'", line);
        return it->second + pname.substr(colon + 1);
    }

    static std::string strip(const std::string& iri, const char* base) {
        std::string b(base);
        return iri.rfind(b, 0) == 0 ? iri.substr(b.size()) : iri;
    }

    std::string node_from_iri(const std::string& iri) const { return strip(iri, kInst); }

    std::string predicate_from_iri(const std::string& iri, int line) const {
        static const std::map<std::string, std::string> known = {
            {std::string(kBot) + "adjacentElement", pred::adjacent},
            {std::string(kBot) + "containsElement", pred::contains},
            {std::string(kBot) + "hasSubElement", pred::has_sub_element},
            {std::string(kProps) + "hasGeometry", pred::has_geometry},
            {std::string(kProps) + "hasMaterial", pred::has_material},
            {std::string(kProps) + "isStatic", pred::is_static},
            {kRdfType, pred::type},
        };
        auto it = known.find(iri);
        if (it != known.end()) return it->second;
        if (!is_iri(iri)) throw TurtleParseError("unknown predicate '" + iri + "'", line);
        return iri; // foreign predicate kept opaque
    }

    void parse_prefix() {
        advance(); // past @prefix
        if (tok.kind != Tok::Pname || tok.text.back() != ':')
            throw TurtleParseError("expected prefix name", tok.line);
        std::string name = tok.text.substr(0, tok.text.size() - 1);
        advance();
        if (tok.kind != Tok::Iri) throw TurtleParseError("expected IRI in @prefix", tok.line);
        prefixes[name] = tok.text;
        advance();
        if (tok.kind != Tok::Dot) throw TurtleParseError("expected '.' after @prefix", tok.line);
        advance();
    }

    std::string parse_subject() {
        if (tok.kind == Tok::Iri) {
            std::string s = node_from_iri(tok.text);
            advance();
            return s;
        }
        if (tok.kind == Tok::Pname) {
            std::string s = node_from_iri(expand(tok.text, tok.line));
            advance();
            return s;
        }
        throw TurtleParseError("expected subject", tok.line);
    }

    void parse_object(const std::string& subject, const std::string& predicate) {
        Triple t;
        t.subject = subject;
        t.predicate = predicate;
        if (tok.kind == Tok::String) {
            t.object_kind = ObjKind::Literal;
            t.object = tok.text;
        } else if (tok.kind == Tok::Bool) {
            t.object_kind = ObjKind::Boolean;
            t.object = tok.text;
        } else if (tok.kind == Tok::Iri || tok.kind == Tok::Pname) {
            std::string iri = tok.kind == Tok::Iri ? tok.text : expand(tok.text, tok.line);
            t.object_kind = ObjKind::Node;
            if (predicate == pred::type) {
                if (iri == std::string(kBot) + "Space")
                    t.object = "Space";
                else
                    t.object = strip(iri, kBeo);
            } else {
                t.object = node_from_iri(iri);
            }
            // canonical form for materials written as resources
            if (predicate == pred::has_material) {
                std::string name = t.object;
                auto cut = name.find_last_of("#/");
                if (cut != std::string::npos) name = name.substr(cut + 1);
                t.object_kind = ObjKind::Literal;
                t.object = name;
            }
        } else {
            throw TurtleParseError("expected object", tok.line);
        }
        advance();
        g.triples.insert(std::move(t));
    }

    void parse_block() {
        std::string subject = parse_subject();
        while (true) {
            std::string predicate;
            if (tok.kind == Tok::A) {
                predicate = pred::type;
            } else if (tok.kind == Tok::Iri) {
                predicate = predicate_from_iri(tok.text, tok.line);
            } else if (tok.kind == Tok::Pname) {
                predicate = predicate_from_iri(expand(tok.text, tok.line), tok.line);
            } else {
                throw TurtleParseError("expected predicate", tok.line);
            }
            advance();
            parse_object(subject, predicate);
            while (tok.kind == Tok::Comma) {
                advance();
                parse_object(subject, predicate);
            }
            if (tok.kind == Tok::Semi) {
                advance();
                continue;
            }
            if (tok.kind == Tok::Dot) {
                advance();
                return;
            }
            throw TurtleParseError("expected ';', ',' or '.'", tok.line);
        }
    }

    Graph run() {
        while (tok.kind != Tok::End) {
            if (tok.kind == Tok::Prefix)
                parse_prefix();
            else
                parse_block();
        }
        for (const auto& t : g.triples) {
            if (t.predicate != pred::has_geometry) continue;
            try {
                g.geometry[t.subject] = geom::decode_mesh(t.object);
            } catch (const GeometryError& e) {
                throw TurtleParseError("geometry of " + t.subject + ": " + e.what(), 0);
            }
        }
        return std::move(g);
    }
};

} // namespace

std::string to_turtle(const Graph& graph) {
    std::string out;
    out += "@prefix beo: <" + std::string(kBeo) + "> .\n";
    out += "@prefix bot: <" + std::string(kBot) + "> .\n";
    out += "@prefix inst: <" + std::string(kInst) + "> .\n";
    out += "@prefix props: <" + std::string(kProps) + "> .\n";

    auto it = graph.triples.begin();
    while (it != graph.triples.end()) {
        const std::string& subject = it->subject;
        auto end = it;
        while (end != graph.triples.end() && end->subject == subject) ++end;

        // group by predicate in canonical order (objects keep set order)
        std::vector<std::pair<std::string, std::vector<const Triple*>>> groups;
        for (auto t = it; t != end; ++t) {
            if (groups.empty() || groups.back().first != t->predicate)
                groups.push_back({t->predicate, {}});
            groups.back().second.push_back(&*t);
        }
        std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
            int ra = pred_rank(a.first), rb = pred_rank(b.first);
            return ra != rb ? ra < rb : a.first < b.first;
        });

        out += "\n" + render_node(subject) + " ";
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (i) out += " ;\n    ";
            out += render_pred(groups[i].first);
            for (std::size_t j = 0; j < groups[i].second.size(); ++j)
                out += (j ? ", " : " ") + render_object(*groups[i].second[j]);
        }
        out += " .\n";
        it = end;
    }
    return out;
}

Graph from_turtle(const std::string& text) { return TtlParser(text).run(); }

} // namespace bim2map::wm
