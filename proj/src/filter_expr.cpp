#include "bim2map/filter_expr.hpp"

#include "bim2map/errors.hpp"

#include <algorithm>
#include <cctype>

namespace bim2map::wm {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct FilterParser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t at) {
        throw FilterParseError(msg, at);
    }

    // next token: a bare word, a quoted name, or a single punctuation char
    struct Word {
        std::string text; // decoded
        std::size_t at = 0;
        bool quoted = false;
    };

    Word next_word() {
        skip_ws();
        Word w;
        w.at = pos;
        if (pos >= text.size()) fail("unexpected end of filter", pos);
        char c = text[pos];
        if (c == '(' || c == ')' || c == ',') {
            w.text = std::string(1, c);
            ++pos;
            return w;
        }
        if (c == '\'') {
            ++pos;
            w.quoted = true;
            while (pos < text.size()) {
                if (text[pos] == '\'') {
                    if (pos + 1 < text.size() && text[pos + 1] == '\'') { // doubled quote
                        w.text += '\'';
                        pos += 2;
                        continue;
                    }
                    ++pos;
                    return w;
                }
                w.text += text[pos++];
            }
            fail("unterminated quoted name", w.at);
        }
        while (pos < text.size()) {
            char d = text[pos];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ',')
                break;
            w.text += d;
            ++pos;
        }
        if (w.text.empty()) fail("unexpected character", w.at);
        return w;
    }

    Word expect(const char* what) {
        if (at_end()) fail(std::string("expected ") + what, pos);
        return next_word();
    }

    void expect_punct(char c) {
        Word w = expect(std::string(1, c).c_str());
        if (w.quoted || w.text != std::string(1, c))
            fail(std::string("expected '") + c + "'", w.at);
    }

    std::set<std::string> parse_name_list() {
        expect_punct('(');
        std::set<std::string> names;
        while (true) {
            Word w = expect("a name");
            if (!w.quoted && (w.text == "," || w.text == "(" || w.text == ")"))
                fail("expected a name", w.at);
            names.insert(w.text);
            Word sep = expect("',' or ')'");
            if (!sep.quoted && sep.text == ")") break;
            if (sep.quoted || sep.text != ",") fail("expected ',' or ')'", sep.at);
        }
        return names;
    }

    ElementFilter run() {
        ElementFilter f;
        bool saw_all = false, saw_include = false;
        while (!at_end()) {
            Word w = next_word();
            std::string kw = w.quoted ? w.text : lower(w.text);
            if (w.quoted) fail("unexpected quoted name", w.at);
            if (kw == "all") {
                saw_all = true;
            } else if (kw == "static") {
                if (f.require_static && !*f.require_static)
                    fail("'static' conflicts with 'dynamic'", w.at);
                f.require_static = true;
            } else if (kw == "dynamic") {
                if (f.require_static && *f.require_static)
                    fail("'dynamic' conflicts with 'static'", w.at);
                f.require_static = false;
            } else if (kw == "type") {
                Word in = expect("'in'");
                if (in.quoted || lower(in.text) != "in") fail("expected 'in'", in.at);
                auto names = parse_name_list();
                f.include_types.insert(names.begin(), names.end());
                saw_include = true;
            } else if (kw == "minus") {
                Word kind = expect("'type' or 'material'");
                std::string k = kind.quoted ? kind.text : lower(kind.text);
                if (!kind.quoted && k == "type") {
                    Word in = expect("'in'");
                    if (in.quoted || lower(in.text) != "in") fail("expected 'in'", in.at);
                    auto names = parse_name_list();
                    f.exclude_types.insert(names.begin(), names.end());
                } else if (!kind.quoted && k == "material") {
                    Word name = expect("a material name");
                    if (!name.quoted &&
                        (name.text == "(" || name.text == ")" || name.text == ","))
                        fail("expected a material name", name.at);
                    f.exclude_materials.insert(name.text);
                } else {
                    fail("expected 'type' or 'material' after 'minus'", kind.at);
                }
            } else {
                fail("unknown keyword '" + w.text + "'", w.at);
            }
        }
        if (saw_all && saw_include) fail("'all' cannot be combined with 'type in'", 0);
        f.include_all = !saw_include;
        // overlap is rejected here too so errors surface before any query runs
        for (const auto& t : f.include_types) {
            std::string lt = lower(t);
            for (const auto& e : f.exclude_types)
                if (lower(e) == lt) fail("type '" + t + "' both included and excluded", 0);
        }
        return f;
    }
};

} // namespace

ElementFilter parse_filter(std::string_view expr) {
    FilterParser p{expr};
    ElementFilter f = p.run();
    return f;
}

} // namespace bim2map::wm
