#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qpcf/exact.hpp"

namespace qpcf {

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary | primary)*     juxtaposition multiplies: 2i, 3beta
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := integer | integer '/' integer | 'i' | 'w' | 'gamma' | 'beta' | '(' expr ')'
// 'i' needs gamma^2 = -1 and 'w' needs gamma^2 + gamma + 1 = 0. Throws ParseError.
ExactElement parse_element(const Field& field, std::string_view text);

// Comma-separated list of literals, e.g. "1/3, 1/9 + i".
std::vector<ExactElement> parse_element_list(const Field& field, std::string_view text);

// "input\n   ^ message" for a ParseError at `position`.
std::string caret_diagnostic(std::string_view input, std::size_t position, std::string_view message);

}  // namespace qpcf
