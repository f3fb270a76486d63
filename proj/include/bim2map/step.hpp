#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bim2map::step {

struct Value;

struct Null {
    bool operator==(const Null&) const { return true; }
};
struct Derived {
    bool operator==(const Derived&) const { return true; }
};
struct EnumTag {
    std::string tag; // without the enclosing dots, e.g. "T", "LENGTHUNIT"
    bool operator==(const EnumTag&) const = default;
};
struct EntityRef {
    std::int64_t id = 0;
    bool operator==(const EntityRef&) const = default;
};
struct Binary {
    std::string hex; // raw hex digits as written between double quotes
    bool operator==(const Binary&) const = default;
};
struct List {
    std::vector<Value> items;
    bool operator==(const List&) const;
};
// Keyword-wrapped value, e.g. IFCBOOLEAN(.T.). Well-formed files carry one argument.
struct Typed {
    std::string type_name;
    std::vector<Value> args;
    bool operator==(const Typed&) const;
};

struct Value {
    using Data = std::variant<Null, Derived, std::int64_t, double, std::string,
                              EnumTag, EntityRef, Typed, List, Binary>;
    Data data;

    Value() : data(Null{}) {}
    Value(Data d) : data(std::move(d)) {}

    bool is_null() const { return std::holds_alternative<Null>(data); }
    bool is_derived() const { return std::holds_alternative<Derived>(data); }

    const std::int64_t* as_int() const { return std::get_if<std::int64_t>(&data); }
    const double* as_real() const { return std::get_if<double>(&data); }
    const std::string* as_string() const { return std::get_if<std::string>(&data); }
    const EnumTag* as_enum() const { return std::get_if<EnumTag>(&data); }
    const EntityRef* as_ref() const { return std::get_if<EntityRef>(&data); }
    const List* as_list() const { return std::get_if<List>(&data); }
    const Typed* as_typed() const { return std::get_if<Typed>(&data); }

    // Numeric accessor: integers promote to double.
    std::optional<double> numeric() const {
        if (auto* r = as_real()) return *r;
        if (auto* i = as_int()) return static_cast<double>(*i);
        return std::nullopt;
    }

    bool operator==(const Value&) const;
};

struct Instance {
    std::int64_t id = 0;
    std::string type_name; // keyword as written, uppercased
    std::vector<Value> attributes;

    const Value& attr(std::size_t i) const {
        static const Value null_value;
        return i < attributes.size() ? attributes[i] : null_value;
    }
    bool operator==(const Instance&) const;
};

struct Header {
    std::vector<std::string> description;    // FILE_DESCRIPTION first argument
    std::string implementation_level = "2;1"; // FILE_DESCRIPTION second argument
    std::string name;                         // FILE_NAME first argument
    std::string schema;                       // FILE_SCHEMA first schema name
    std::string raw;                          // verbatim HEADER section text (not compared)

    bool operator==(const Header& o) const {
        return description == o.description && implementation_level == o.implementation_level &&
               name == o.name && schema == o.schema;
    }
};

struct Model {
    Header header;
    std::map<std::int64_t, Instance> instances; // keyed and ordered by id
    std::vector<std::string> warnings;          // dangling references, schema notes

    const Instance* find(std::int64_t id) const {
        auto it = instances.find(id);
        return it == instances.end() ? nullptr : &it->second;
    }
    // Follows one entity reference; nullptr when v is not a resolvable reference.
    const Instance* deref(const Value& v) const {
        auto* r = v.as_ref();
        return r ? find(r->id) : nullptr;
    }
    bool operator==(const Model& o) const {
        return header == o.header && instances == o.instances;
    }
};

enum class TokenKind {
    Keyword,   // IFCWALL, ISO-10303-21, HEADER, ...
    String,    // decoded UTF-8 content
    Integer,
    Real,
    Enum,      // .TAG.
    Ref,       // #123
    Binary,    // "0AF..."
    Dollar,
    Star,
    LParen,
    RParen,
    Comma,
    Semicolon,
    Equals,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;          // keyword / string / enum tag / binary hex
    std::int64_t int_value = 0; // Integer and Ref
    double real_value = 0.0;
    int line = 1;
};

// Streaming tokenizer over a whole file held in memory.
class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}
    Token next();
    int line() const { return line_; }
    std::size_t offset() const { return pos_; } // byte position after the last token

private:
    void skip_ws_and_comments();
    Token lex_string();
    Token lex_number();
    Token lex_enum();
    Token lex_keyword();

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

std::vector<Token> tokenize(std::string_view text);

Model parse_step(std::string_view text);
Model parse_step_file(const std::string& path);

// Canonical serialization: sorted instances, normalized escapes and real formats.
// parse_step(write_step(m)) == m.
std::string write_step(const Model& model);

// STEP string codec ('' doubling, \\, \X\hh, \X2\...\X0\, \X4\...\X0\, \S\c).
std::string decode_step_string(std::string_view raw, int line_for_errors = 0);
std::string encode_step_string(std::string_view utf8);

} // namespace bim2map::step
