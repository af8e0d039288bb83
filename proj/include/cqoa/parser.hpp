#pragma once

#include <stdexcept>
#include <string>

#include "cqoa/engine.hpp"
#include "cqoa/expr.hpp"

namespace cqoa {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

/// Parses the expression language:
///   expr   := ["-"] term (("+"|"-") term)*
///   term   := [scalar "*"] factor | scalar
///   factor := generator | "1" | "d" [int] "(" expr ")" | ":" factor+ ":"
///             | "(" expr ")"
///   scalar := rational/kappa arithmetic with + - * / ^ and parentheses
/// Wick groups :f1 f2 ...: build the right-nested iterated product through
/// the engine, so the result is always in canonical form.
FieldExpr parse_expr(const std::string& src, Engine& engine);

/// Parses a standalone scalar (coefficient) value.
Coefficient parse_coefficient(const std::string& src);

/// Deterministic canonical rendering; parse_expr(render(e)) == e.
std::string render(const FieldExpr& e);
std::string render_monomial(const WickMonomial& m, const AlgebraSpec& a);

}  // namespace cqoa
