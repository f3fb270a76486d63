#include "bim2map/step.hpp"

#include "bim2map/errors.hpp"

#include <cctype>
#include <charconv>

namespace bim2map::step {

namespace {

bool is_keyword_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-'; // '-' covers ISO-10303-21 / END-ISO-10303-21
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Reads exactly n hex digits from raw at i; throws on shortfall.
std::uint32_t read_hex(std::string_view raw, std::size_t& i, int n, int line) {
    std::uint32_t v = 0;
    for (int k = 0; k < n; ++k) {
        if (i >= raw.size() || hex_digit(raw[i]) < 0)
            throw StepParseError("bad hex digits in string control directive", line);
        v = v * 16 + static_cast<std::uint32_t>(hex_digit(raw[i]));
        ++i;
    }
    return v;
}

} // namespace

std::string decode_step_string(std::string_view raw, int line) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        char c = raw[i];
        if (c == '\'') {
            // tokenizer passes '' pairs through; collapse here
            if (i + 1 < raw.size() && raw[i + 1] == '\'') {
                out.push_back('\'');
                i += 2;
                continue;
            }
            out.push_back('\'');
            ++i;
            continue;
        }
        if (c != '\\') {
            out.push_back(c);
            ++i;
            continue;
        }
        if (i + 1 >= raw.size()) throw StepParseError("trailing backslash in string", line);
        char d = raw[i + 1];
        if (d == '\\') {
            out.push_back('\\');
            i += 2;
        } else if ((d == 'S' || d == 's') && i + 3 < raw.size() && raw[i + 2] == '\\') {
            // \S\c : ISO 8859 upper half
            append_utf8(out, static_cast<unsigned char>(raw[i + 3]) + 0x80u);
            i += 4;
        } else if ((d == 'P' || d == 'p') && i + 3 < raw.size() && raw[i + 3] == '\\') {
            // \P?\ code page selection; latin-1 interpretation of \S\ is kept
            i += 4;
        } else if ((d == 'X' || d == 'x') && i + 2 < raw.size() && raw[i + 2] == '\\') {
            i += 3;
            append_utf8(out, read_hex(raw, i, 2, line));
        } else if ((d == 'X' || d == 'x') && i + 3 < raw.size() &&
                   (raw[i + 2] == '2' || raw[i + 2] == '4') && raw[i + 3] == '\\') {
            bool wide = raw[i + 2] == '4';
            i += 4;
            std::uint32_t pending_high = 0;
            while (true) {
                if (i + 3 < raw.size() && raw[i] == '\\' && (raw[i + 1] == 'X' || raw[i + 1] == 'x') &&
                    raw[i + 2] == '0' && raw[i + 3] == '\\') {
                    i += 4;
                    break;
                }
                std::uint32_t cp = read_hex(raw, i, wide ? 8 : 4, line);
                if (!wide && cp >= 0xD800 && cp <= 0xDBFF) {
                    pending_high = cp;
                    continue;
                }
                if (!wide && cp >= 0xDC00 && cp <= 0xDFFF && pending_high) {
                    cp = 0x10000 + ((pending_high - 0xD800) << 10) + (cp - 0xDC00);
                    pending_high = 0;
                }
                append_utf8(out, cp);
            }
            if (pending_high) throw StepParseError("unpaired UTF-16 surrogate in \\X2\\", line);
        } else {
            // unknown directive: keep the backslash literally
            out.push_back('\\');
            ++i;
        }
    }
    return out;
}

std::string encode_step_string(std::string_view utf8) {
    std::string out;
    out.reserve(utf8.size());
    std::size_t i = 0;
    auto emit_hex = [&](std::uint32_t v, int n) {
        static const char* digits = "0123456789ABCDEF";
        for (int k = n - 1; k >= 0; --k) out.push_back(digits[(v >> (4 * k)) & 0xF]);
    };
    while (i < utf8.size()) {
        unsigned char c = static_cast<unsigned char>(utf8[i]);
        if (c == '\'') {
            out += "''";
            ++i;
            continue;
        }
        if (c == '\\') {
            out += "\\\\";
            ++i;
            continue;
        }
        if (c >= 0x20 && c <= 0x7E) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        }
        // decode one UTF-8 code point; bad sequences fall back to byte value
        std::uint32_t cp = c;
        int extra = 0;
        if ((c & 0xE0) == 0xC0) {
            cp = c & 0x1F;
            extra = 1;
        } else if ((c & 0xF0) == 0xE0) {
            cp = c & 0x0F;
            extra = 2;
        } else if ((c & 0xF8) == 0xF0) {
            cp = c & 0x07;
            extra = 3;
        }
        bool ok = i + extra < utf8.size();
        for (int k = 1; ok && k <= extra; ++k) {
            unsigned char cc = static_cast<unsigned char>(utf8[i + k]);
            if ((cc & 0xC0) != 0x80)
                ok = false;
            else
                cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok) {
            cp = c;
            extra = 0;
        }
        i += 1 + extra;
        if (cp <= 0xFF) {
            out += "\\X\\";
            emit_hex(cp, 2);
        } else if (cp <= 0xFFFF) {
            out += "\\X2\\";
            emit_hex(cp, 4);
            out += "\\X0\\";
        } else {
            out += "\\X4\\";
            emit_hex(cp, 8);
            out += "\\X0\\";
        }
    }
    return out;
}

void Lexer::skip_ws_and_comments() {
    while (pos_ < text_.size()) {
        char c = text_[pos_];
        if (c == '\n') {
            ++line_;
            ++pos_;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++pos_;
        } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
            int start_line = line_;
            pos_ += 2;
            while (true) {
                if (pos_ + 1 >= text_.size())
                    throw StepParseError("unterminated comment", start_line);
                if (text_[pos_] == '*' && text_[pos_ + 1] == '/') {
                    pos_ += 2;
                    break;
                }
                if (text_[pos_] == '\n') ++line_;
                ++pos_;
            }
        } else {
            break;
        }
    }
}

Token Lexer::lex_string() {
    Token t;
    t.kind = TokenKind::String;
    t.line = line_;
    ++pos_; // opening quote
    std::string raw;
    while (true) {
        if (pos_ >= text_.size()) throw StepParseError("unterminated string", t.line);
        char c = text_[pos_];
        if (c == '\'') {
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
                raw += "''";
                pos_ += 2;
                continue;
            }
            ++pos_;
            break;
        }
        if (c == '\n') ++line_;
        raw.push_back(c);
        ++pos_;
    }
    t.text = decode_step_string(raw, t.line);
    return t;
}

Token Lexer::lex_number() {
    Token t;
    t.line = line_;
    std::size_t start = pos_;
    if (text_[pos_] == '+' || text_[pos_] == '-') ++pos_;
    bool any_digit = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        any_digit = true;
    }
    bool is_real = false;
    if (pos_ < text_.size() && text_[pos_] == '.') {
        is_real = true;
        ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'E' || text_[pos_] == 'e')) {
        std::size_t save = pos_;
        ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            is_real = true;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        } else {
            pos_ = save; // 'E' belongs to something else
        }
    }
    if (!any_digit) throw StepParseError("malformed number", t.line);
    std::string_view s = text_.substr(start, pos_ - start);
    if (is_real) {
        t.kind = TokenKind::Real;
        double v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{}) throw StepParseError("malformed real", t.line);
        t.real_value = v;
    } else {
        t.kind = TokenKind::Integer;
        std::int64_t v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{}) throw StepParseError("integer out of range", t.line);
        t.int_value = v;
    }
    return t;
}

Token Lexer::lex_enum() {
    Token t;
    t.kind = TokenKind::Enum;
    t.line = line_;
    ++pos_; // leading dot
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '.') {
        char c = text_[pos_];
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            throw StepParseError("malformed enumeration literal", t.line);
        ++pos_;
    }
    if (pos_ >= text_.size()) throw StepParseError("unterminated enumeration literal", t.line);
    t.text.assign(text_.substr(start, pos_ - start));
    for (auto& ch : t.text) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    ++pos_; // trailing dot
    return t;
}

Token Lexer::lex_keyword() {
    Token t;
    t.kind = TokenKind::Keyword;
    t.line = line_;
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_keyword_char(text_[pos_])) ++pos_;
    t.text.assign(text_.substr(start, pos_ - start));
    for (auto& ch : t.text) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return t;
}

Token Lexer::next() {
    skip_ws_and_comments();
    Token t;
    t.line = line_;
    if (pos_ >= text_.size()) {
        t.kind = TokenKind::End;
        return t;
    }
    char c = text_[pos_];
    switch (c) {
    case '(': ++pos_; t.kind = TokenKind::LParen; return t;
    case ')': ++pos_; t.kind = TokenKind::RParen; return t;
    case ',': ++pos_; t.kind = TokenKind::Comma; return t;
    case ';': ++pos_; t.kind = TokenKind::Semicolon; return t;
    case '=': ++pos_; t.kind = TokenKind::Equals; return t;
    case '$': ++pos_; t.kind = TokenKind::Dollar; return t;
    case '*': ++pos_; t.kind = TokenKind::Star; return t;
    case '\'': return lex_string();
    case '.': return lex_enum();
    default: break;
    }
    if (c == '#') {
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw StepParseError("'#' not followed by an instance id", t.line);
        t.kind = TokenKind::Ref;
        std::string_view s = text_.substr(start, pos_ - start);
        auto res = std::from_chars(s.data(), s.data() + s.size(), t.int_value);
        if (res.ec != std::errc{}) throw StepParseError("instance id out of range", t.line);
        return t;
    }
    if (c == '"') {
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
        if (pos_ >= text_.size()) throw StepParseError("unterminated binary literal", t.line);
        t.kind = TokenKind::Binary;
        t.text.assign(text_.substr(start, pos_ - start));
        ++pos_;
        return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-') return lex_number();
    if (is_keyword_char(c)) return lex_keyword();
    throw StepParseError(std::string("unexpected character '") + c + "'", t.line);
}

std::vector<Token> tokenize(std::string_view text) {
    Lexer lx(text);
    std::vector<Token> out;
    while (true) {
        Token t = lx.next();
        bool end = t.kind == TokenKind::End;
        out.push_back(std::move(t));
        if (end) break;
    }
    return out;
}

} // namespace bim2map::step
