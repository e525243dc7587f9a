#pragma once

#include <memory>

#include "qdeform/qgroup.hpp"

namespace qdeform {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    int position;
};

/// Parse tree over the expression grammar: generators e<i>, f<i>, w<i>,
/// wp<i>, macros E(i,j) / F(i,j), integer/fraction/theta/t literals and
/// the operators + - * ^ with parentheses.
struct ExprNode {
    enum class Kind { Sum, Product, Power, Number, Theta, TVar, Gen, Macro };
    Kind kind;

    // Sum
    std::vector<std::shared_ptr<ExprNode>> children;
    std::vector<int> signs;  // +1 / -1 per child
    // Power
    long exponent = 1;
    // Number
    Rational value;
    // Gen
    GenSymbol gen{GenKind::E, 1, 1};
    // Macro: E or F with root indices (i, j)
    GenKind macro_side = GenKind::E;
    int macro_i = 1, macro_j = 1;
};

struct ExprAST {
    std::shared_ptr<const ExprNode> root;
    std::string text;
};

/// Parse with index validation against n; throws ParseError with a position
/// on malformed input.
ExprAST parse_expr(const std::string& text, int n, long ell);

/// Evaluate to a free polynomial; macros expand through the engine's root
/// vectors, so the result depends on r and s.
NCPoly eval_expr(const ExprAST& ast, const QGroup& ctx);

/// Scalar-only evaluation (numbers, th, t); rejects generators and macros.
LaurentScalar eval_scalar(const std::string& text, long ell, int working_order);

}  // namespace qdeform
