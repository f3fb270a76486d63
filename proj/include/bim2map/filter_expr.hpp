#pragma once

#include "bim2map/world_model.hpp"

#include <string_view>

namespace bim2map::wm {

// Filter expression mini-language (keywords case-insensitive):
//   expr    := clause+
//   clause  := "all" | "static" | "dynamic"
//            | "type" "in" "(" names ")"
//            | "minus" ( "type" "in" "(" names ")" | "material" name )
//   names   := name ("," name)*
//   name    := bare word | 'single-quoted'
// Examples: "type in (Wall, Column) minus material Glass", "all static".
// Throws FilterParseError with the byte position of the offending token.
ElementFilter parse_filter(std::string_view expr);

} // namespace bim2map::wm
