#include "bim2map/step.hpp"

#include "bim2map/errors.hpp"
#include "bim2map/numfmt.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace bim2map::step {

bool List::operator==(const List& o) const { return items == o.items; }
bool Typed::operator==(const Typed& o) const { return type_name == o.type_name && args == o.args; }
bool Value::operator==(const Value& o) const { return data == o.data; }
bool Instance::operator==(const Instance& o) const {
    return id == o.id && type_name == o.type_name && attributes == o.attributes;
}

namespace {

struct Parser {
    Lexer lx;
    Token tok;

    explicit Parser(std::string_view text) : lx(text) { advance(); }

    void advance() { tok = lx.next(); }

    [[noreturn]] void fail(const std::string& msg, std::int64_t id = 0) {
        throw StepParseError(msg, tok.line, id);
    }

    void expect(TokenKind k, const char* what) {
        if (tok.kind != k) fail(std::string("expected ") + what);
        advance();
    }

    bool at_keyword(std::string_view kw) const {
        return tok.kind == TokenKind::Keyword && tok.text == kw;
    }

    void expect_keyword(std::string_view kw) {
        if (!at_keyword(kw)) fail("expected `" + std::string(kw) + "`");
        advance();
    }

    Value parse_value(std::int64_t owner) {
        switch (tok.kind) {
        case TokenKind::Dollar: advance(); return Value(Null{});
        case TokenKind::Star: advance(); return Value(Derived{});
        case TokenKind::Integer: {
            std::int64_t v = tok.int_value;
            advance();
            return Value(v);
        }
        case TokenKind::Real: {
            double v = tok.real_value;
            advance();
            return Value(v);
        }
        case TokenKind::String: {
            std::string s = std::move(tok.text);
            advance();
            return Value(std::move(s));
        }
        case TokenKind::Enum: {
            EnumTag e{std::move(tok.text)};
            advance();
            return Value(std::move(e));
        }
        case TokenKind::Ref: {
            EntityRef r{tok.int_value};
            advance();
            return Value(r);
        }
        case TokenKind::Binary: {
            Binary b{std::move(tok.text)};
            advance();
            return Value(std::move(b));
        }
        case TokenKind::LParen: {
            advance();
            List l;
            if (tok.kind != TokenKind::RParen) {
                while (true) {
                    l.items.push_back(parse_value(owner));
                    if (tok.kind == TokenKind::Comma) {
                        advance();
                        continue;
                    }
                    break;
                }
            }
            expect(TokenKind::RParen, "`)`");
            return Value(std::move(l));
        }
        case TokenKind::Keyword: {
            Typed t;
            t.type_name = std::move(tok.text);
            advance();
            t.args = parse_arg_list(owner);
            return Value(std::move(t));
        }
        default: fail("expected a value", owner);
        }
    }

    std::vector<Value> parse_arg_list(std::int64_t owner) {
        expect(TokenKind::LParen, "`(`");
        std::vector<Value> args;
        if (tok.kind != TokenKind::RParen) {
            while (true) {
                args.push_back(parse_value(owner));
                if (tok.kind == TokenKind::Comma) {
                    advance();
                    continue;
                }
                break;
            }
        }
        expect(TokenKind::RParen, "`)`");
        return args;
    }
};

std::string header_string(const std::vector<Value>& args, std::size_t i) {
    if (i < args.size())
        if (auto* s = args[i].as_string()) return *s;
    return {};
}

void apply_header_entity(Header& h, const std::string& kw, const std::vector<Value>& args) {
    if (kw == "FILE_DESCRIPTION") {
        if (!args.empty())
            if (auto* l = args[0].as_list())
                for (const auto& v : l->items)
                    if (auto* s = v.as_string()) h.description.push_back(*s);
        if (args.size() > 1)
            if (auto* s = args[1].as_string()) h.implementation_level = *s;
    } else if (kw == "FILE_NAME") {
        h.name = header_string(args, 0);
    } else if (kw == "FILE_SCHEMA") {
        if (!args.empty())
            if (auto* l = args[0].as_list())
                if (!l->items.empty())
                    if (auto* s = l->items[0].as_string()) h.schema = *s;
    }
    // other header entities (FILE_POPULATION, ...) are preserved in raw only
}

void collect_refs(const Value& v, std::set<std::int64_t>& out) {
    if (auto* r = v.as_ref()) {
        out.insert(r->id);
    } else if (auto* l = v.as_list()) {
        for (const auto& item : l->items) collect_refs(item, out);
    } else if (auto* t = v.as_typed()) {
        for (const auto& a : t->args) collect_refs(a, out);
    }
}

// STEP real grammar wants a '.' in the mantissa; exponents use 'E'.
std::string step_real(double v) {
    std::string s = format_double(v);
    auto epos = s.find_first_of("eE");
    std::string mant = epos == std::string::npos ? s : s.substr(0, epos);
    std::string exp = epos == std::string::npos ? std::string() : s.substr(epos + 1);
    if (mant.find('.') == std::string::npos) mant += '.';
    if (exp.empty()) return mant;
    return mant + "E" + exp;
}

void write_value(std::string& out, const Value& v) {
    struct Visitor {
        std::string& out;
        void operator()(const Null&) { out += '$'; }
        void operator()(const Derived&) { out += '*'; }
        void operator()(std::int64_t i) { out += std::to_string(i); }
        void operator()(double d) { out += step_real(d); }
        void operator()(const std::string& s) {
            out += '\'';
            out += encode_step_string(s);
            out += '\'';
        }
        void operator()(const EnumTag& e) {
            out += '.';
            out += e.tag;
            out += '.';
        }
        void operator()(const EntityRef& r) {
            out += '#';
            out += std::to_string(r.id);
        }
        void operator()(const Typed& t) {
            out += t.type_name;
            out += '(';
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                if (i) out += ',';
                write_value(out, t.args[i]);
            }
            out += ')';
        }
        void operator()(const List& l) {
            out += '(';
            for (std::size_t i = 0; i < l.items.size(); ++i) {
                if (i) out += ',';
                write_value(out, l.items[i]);
            }
            out += ')';
        }
        void operator()(const Binary& b) {
            out += '"';
            out += b.hex;
            out += '"';
        }
    };
    std::visit(Visitor{out}, v.data);
}

} // namespace

Model parse_step(std::string_view text) {
    Parser p(text);
    if (!p.at_keyword("ISO-10303-21")) throw StepParseError("missing `ISO-10303-21;` sentinel", 1);
    p.advance();
    p.expect(TokenKind::Semicolon, "`;` after `ISO-10303-21`");

    Model m;

    p.expect_keyword("HEADER");
    p.expect(TokenKind::Semicolon, "`;` after `HEADER`");
    std::size_t raw_begin = p.lx.offset();
    std::size_t raw_end = raw_begin;
    while (true) {
        if (p.tok.kind == TokenKind::End) p.fail("unterminated HEADER section");
        if (p.at_keyword("ENDSEC")) {
            p.advance();
            p.expect(TokenKind::Semicolon, "`;` after `ENDSEC`");
            break;
        }
        if (p.tok.kind != TokenKind::Keyword) p.fail("expected a header entity keyword");
        std::string kw = p.tok.text;
        p.advance();
        auto args = p.parse_arg_list(0);
        p.expect(TokenKind::Semicolon, "`;` after header entity");
        raw_end = p.lx.offset();
        apply_header_entity(m.header, kw, args);
    }
    m.header.raw = std::string(text.substr(raw_begin, raw_end - raw_begin));

    bool saw_data = false;
    while (p.at_keyword("DATA")) {
        saw_data = true;
        p.advance();
        // a data section may carry parenthesized parameters; tolerate and skip
        if (p.tok.kind == TokenKind::LParen) p.parse_arg_list(0);
        p.expect(TokenKind::Semicolon, "`;` after `DATA`");
        while (true) {
            if (p.tok.kind == TokenKind::End) p.fail("unterminated DATA section");
            if (p.at_keyword("ENDSEC")) {
                p.advance();
                p.expect(TokenKind::Semicolon, "`;` after `ENDSEC`");
                break;
            }
            if (p.tok.kind != TokenKind::Ref) p.fail("expected `#id=` instance start");
            Instance inst;
            inst.id = p.tok.int_value;
            int id_line = p.tok.line;
            p.advance();
            p.expect(TokenKind::Equals, "`=`");
            if (p.tok.kind == TokenKind::LParen)
                throw StepParseError("complex (multi-keyword) instances are not supported",
                                     id_line, inst.id);
            if (p.tok.kind != TokenKind::Keyword)
                throw StepParseError("expected an entity keyword", p.tok.line, inst.id);
            inst.type_name = p.tok.text;
            p.advance();
            inst.attributes = p.parse_arg_list(inst.id);
            if (p.tok.kind != TokenKind::Semicolon)
                throw StepParseError("expected `;` after instance", p.tok.line, inst.id);
            p.advance();
            if (!m.instances.emplace(inst.id, std::move(inst)).second)
                throw StepParseError("duplicate instance id", id_line, inst.id);
        }
    }
    if (!saw_data) p.fail("missing DATA section");

    p.expect_keyword("END-ISO-10303-21");
    p.expect(TokenKind::Semicolon, "`;` after `END-ISO-10303-21`");
    if (p.tok.kind != TokenKind::End) p.fail("trailing content after `END-ISO-10303-21;`");

    // Unresolved references are reported but the owning instances are kept.
    for (const auto& [id, inst] : m.instances) {
        std::set<std::int64_t> refs;
        for (const auto& a : inst.attributes) collect_refs(a, refs);
        for (auto target : refs)
            if (!m.instances.count(target))
                m.warnings.push_back("unresolved reference #" + std::to_string(target) + " in #" +
                                     std::to_string(id) + " (" + inst.type_name + ")");
    }
    return m;
}

Model parse_step_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_step(ss.str());
}

std::string write_step(const Model& model) {
    std::string out;
    out.reserve(model.instances.size() * 64 + 256);
    out += "ISO-10303-21;\nHEADER;\nFILE_DESCRIPTION((";
    for (std::size_t i = 0; i < model.header.description.size(); ++i) {
        if (i) out += ',';
        out += '\'';
        out += encode_step_string(model.header.description[i]);
        out += '\'';
    }
    out += "),'";
    out += encode_step_string(model.header.implementation_level);
    out += "');\nFILE_NAME('";
    out += encode_step_string(model.header.name);
    out += "','',(),(),'','','');\nFILE_SCHEMA((";
    if (!model.header.schema.empty()) {
        out += '\'';
        out += encode_step_string(model.header.schema);
        out += '\'';
    }
    out += "));\nENDSEC;\nDATA;\n";
    for (const auto& [id, inst] : model.instances) {
        out += '#';
        out += std::to_string(id);
        out += '=';
        out += inst.type_name;
        out += '(';
        for (std::size_t i = 0; i < inst.attributes.size(); ++i) {
            if (i) out += ',';
            write_value(out, inst.attributes[i]);
        }
        out += ");\n";
    }
    out += "ENDSEC;\nEND-ISO-10303-21;\n";
    return out;
}

} // namespace bim2map::step
