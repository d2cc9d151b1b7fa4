#pragma once

#include <string>
#include <utility>

#include "doctest.h"
#include "pepa/model.hpp"
#include "pepa/parser.hpp"

namespace testutil {

// Parses and validates, failing the test with the first diagnostic on error.
inline pepa::ModelEnv must_parse(const std::string& text) {
  pepa::ParseResult r = pepa::parse_model(text);
  if (!r.env) {
    REQUIRE_MESSAGE(false, "parse failed: " << (r.diagnostics.empty()
                                                    ? std::string("no diagnostic")
                                                    : r.diagnostics[0].message));
  }
  std::vector<pepa::Diagnostic> problems = pepa::validate(*r.env);
  if (!problems.empty())
    REQUIRE_MESSAGE(false, "validation failed: " << problems[0].message);
  return std::move(*r.env);
}

inline pepa::TermPtr must_term(const std::string& text) {
  pepa::ExprParseResult r = pepa::parse_expression(text);
  if (!r.term) {
    REQUIRE_MESSAGE(false, "expression parse failed: "
                               << (r.diagnostics.empty()
                                       ? std::string("no diagnostic")
                                       : r.diagnostics[0].message));
  }
  return r.term;
}

inline std::string first_message(const std::vector<pepa::Diagnostic>& ds) {
  return ds.empty() ? std::string() : ds[0].message;
}

}  // namespace testutil

// Test files call these unqualified.
using testutil::first_message;
using testutil::must_parse;
using testutil::must_term;
