#pragma once

#include "unextend/crn.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace unextend {

struct ExprParseError : std::runtime_error {
  ExprParseError(std::size_t position_arg, const std::string& what_arg)
      : std::runtime_error("position " + std::to_string(position_arg) + ": " + what_arg),
        position(position_arg) {}
  std::size_t position;  // 0-based offset into the input text
};

// Grammar: sums of products of (possibly negated, possibly parenthesized)
// nonnegative rational literals like "2" or "1/3". The operator set is
// exactly {+, unary -, *}; there is no binary minus and no division beyond
// the literal slash. Whitespace is insignificant.
//
// Both evaluators accept the same language; the first builds the value in
// interval form (every node widens its precision queries the way the
// arithmetic closure requires), the second computes the exact rational.
Crn parse_crn_expression(std::string_view text);        // throws ExprParseError
Rational parse_exact_expression(std::string_view text);  // throws ExprParseError

}  // namespace unextend
