#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pepa/model.hpp"

namespace pepa {

struct ParseResult {
  std::optional<ModelEnv> env;  // engaged iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
};

// Parses the .pepa concrete syntax:
//   model      := item* with items  X = choice;  |  high {a,b};  |  system modexpr;
//   choice     := prefixterm ("+" prefixterm)*
//   prefixterm := "(" action "," rate ")" "." prefixterm | CONST | "0"
//   rate       := NUMBER | "T" | INT "*" "T"     (NUMBER: integer, decimal, p/q)
//   modexpr    := hidelevel ("<" names? ">" hidelevel)*   left-associative
//   hidelevel  := atom ("/" "{" names "}")*
//   atom       := CONST | "0" | "(" modexpr ")" | choice starting with "(" action
// Comments run from "//" to end of line. Constants are uppercase-initial,
// actions lowercase-initial; "tau" is legal only in prefixes.
ParseResult parse_model(const std::string& text);

// Inverse of parse_model up to structural equality: parse(render(env)) == env.
// Requires a valid env whose terms have concrete forms.
std::string render(const ModelEnv& env);

struct ExprParseResult {
  TermPtr term;  // null iff diagnostics is nonempty
  std::vector<Diagnostic> diagnostics;
};

// Parses a single expression (the modexpr grammar above) for CLI flags such
// as --left/--right. No trailing input allowed. Constants are resolved
// against whatever env the caller pairs the term with.
ExprParseResult parse_expression(const std::string& text);

}  // namespace pepa
