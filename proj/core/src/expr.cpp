#include "qdeform/expr.hpp"

#include <cctype>

namespace qdeform {

namespace {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, Comma, Slash, End };
    Kind kind;
    std::string text;
    int pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }
    Token next() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        int start = static_cast<int>(pos_);
        if (pos_ >= text_.size()) {
            current_ = {Token::Kind::End, "", start};
            return;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t end = pos_;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end])))
                ++end;
            current_ = {Token::Kind::Number, text_.substr(pos_, end - pos_), start};
            pos_ = end;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end]))))
                ++end;
            current_ = {Token::Kind::Ident, text_.substr(pos_, end - pos_), start};
            pos_ = end;
            return;
        }
        ++pos_;
        switch (c) {
            case '+': current_ = {Token::Kind::Plus, "+", start}; return;
            case '-': current_ = {Token::Kind::Minus, "-", start}; return;
            case '*': current_ = {Token::Kind::Star, "*", start}; return;
            case '^': current_ = {Token::Kind::Caret, "^", start}; return;
            case '(': current_ = {Token::Kind::LParen, "(", start}; return;
            case ')': current_ = {Token::Kind::RParen, ")", start}; return;
            case ',': current_ = {Token::Kind::Comma, ",", start}; return;
            case '/': current_ = {Token::Kind::Slash, "/", start}; return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }

    const std::string& text_;
    size_t pos_ = 0;
    Token current_;
};

using NodePtr = std::shared_ptr<ExprNode>;

class Parser {
public:
    Parser(const std::string& text, int n, long ell) : lex_(text), n_(n), ell_(ell) {}

    NodePtr parse() {
        NodePtr e = expr();
        if (lex_.peek().kind != Token::Kind::End)
            throw ParseError("trailing input", lex_.peek().pos);
        return e;
    }

private:
    NodePtr expr() {
        auto sum = std::make_shared<ExprNode>();
        sum->kind = ExprNode::Kind::Sum;
        int sign = 1;
        if (lex_.peek().kind == Token::Kind::Minus) {
            lex_.next();
            sign = -1;
        }
        sum->children.push_back(term());
        sum->signs.push_back(sign);
        while (lex_.peek().kind == Token::Kind::Plus || lex_.peek().kind == Token::Kind::Minus) {
            sign = lex_.next().kind == Token::Kind::Plus ? 1 : -1;
            sum->children.push_back(term());
            sum->signs.push_back(sign);
        }
        if (sum->children.size() == 1 && sum->signs[0] == 1) return sum->children[0];
        return sum;
    }

    NodePtr term() {
        auto prod = std::make_shared<ExprNode>();
        prod->kind = ExprNode::Kind::Product;
        prod->children.push_back(factor());
        while (lex_.peek().kind == Token::Kind::Star) {
            lex_.next();
            prod->children.push_back(factor());
        }
        if (prod->children.size() == 1) return prod->children[0];
        return prod;
    }

    NodePtr factor() {
        NodePtr base = atom();
        if (lex_.peek().kind != Token::Kind::Caret) return base;
        int caret_pos = lex_.next().pos;
        long sign = 1;
        if (lex_.peek().kind == Token::Kind::Minus) {
            lex_.next();
            sign = -1;
        }
        Token t = lex_.next();
        if (t.kind != Token::Kind::Number)
            throw ParseError("expected integer exponent", caret_pos);
        long k = sign * std::stol(t.text);
        validate_exponent(base, k, caret_pos);
        auto pw = std::make_shared<ExprNode>();
        pw->kind = ExprNode::Kind::Power;
        pw->children.push_back(base);
        pw->exponent = k;
        return pw;
    }

    void validate_exponent(const NodePtr& base, long k, int pos) {
        if (k >= 0) return;
        switch (base->kind) {
            case ExprNode::Kind::Number:
            case ExprNode::Kind::Theta:
            case ExprNode::Kind::TVar:
                return;
            case ExprNode::Kind::Gen:
                if (base->gen.group_like()) return;
                throw ParseError("e/f generators are not invertible", pos);
            default:
                throw ParseError("negative powers are only defined for scalars and group-likes",
                                 pos);
        }
    }

    NodePtr atom() {
        Token t = lex_.next();
        if (t.kind == Token::Kind::Number) {
            auto node = std::make_shared<ExprNode>();
            node->kind = ExprNode::Kind::Number;
            // fraction literal INT '/' INT
            if (lex_.peek().kind == Token::Kind::Slash) {
                lex_.next();
                Token d = lex_.next();
                if (d.kind != Token::Kind::Number)
                    throw ParseError("expected denominator", d.pos);
                node->value = Rational(mpz_class(t.text), mpz_class(d.text));
            } else {
                node->value = Rational(mpz_class(t.text), mpz_class(1));
            }
            return node;
        }
        if (t.kind == Token::Kind::LParen) {
            NodePtr inner = expr();
            Token close = lex_.next();
            if (close.kind != Token::Kind::RParen) throw ParseError("expected ')'", close.pos);
            return inner;
        }
        if (t.kind != Token::Kind::Ident) throw ParseError("expected an operand", t.pos);

        if (t.text == "th") {
            auto node = std::make_shared<ExprNode>();
            node->kind = ExprNode::Kind::Theta;
            return node;
        }
        if (t.text == "t") {
            auto node = std::make_shared<ExprNode>();
            node->kind = ExprNode::Kind::TVar;
            return node;
        }
        if (t.text == "E" || t.text == "F") {
            auto node = std::make_shared<ExprNode>();
            node->kind = ExprNode::Kind::Macro;
            node->macro_side = t.text == "E" ? GenKind::E : GenKind::F;
            Token open = lex_.next();
            if (open.kind != Token::Kind::LParen)
                throw ParseError("expected '(' after " + t.text, open.pos);
            Token ti = lex_.next();
            if (ti.kind != Token::Kind::Number) throw ParseError("expected root index", ti.pos);
            Token comma = lex_.next();
            if (comma.kind != Token::Kind::Comma) throw ParseError("expected ','", comma.pos);
            Token tj = lex_.next();
            if (tj.kind != Token::Kind::Number) throw ParseError("expected root index", tj.pos);
            Token close = lex_.next();
            if (close.kind != Token::Kind::RParen) throw ParseError("expected ')'", close.pos);
            node->macro_i = std::stoi(ti.text);
            node->macro_j = std::stoi(tj.text);
            if (node->macro_j < 1 || node->macro_i < node->macro_j || node->macro_i > n_ - 1)
                throw ParseError("root indices must satisfy 1 <= j <= i <= n-1 (n=" +
                                     std::to_string(n_) + ")",
                                 ti.pos);
            return node;
        }
        // generator identifiers: e<i>, f<i>, w<i>, wp<i>
        size_t digits = 0;
        while (digits < t.text.size() &&
               !std::isdigit(static_cast<unsigned char>(t.text[digits])))
            ++digits;
        std::string head = t.text.substr(0, digits);
        std::string idx = t.text.substr(digits);
        if (idx.empty()) throw ParseError("unknown identifier '" + t.text + "'", t.pos);
        int i = std::stoi(idx);
        if (i < 1 || i > n_ - 1)
            throw ParseError("generator index " + idx + " out of range for n=" +
                                 std::to_string(n_),
                             t.pos);
        auto node = std::make_shared<ExprNode>();
        node->kind = ExprNode::Kind::Gen;
        if (head == "e")
            node->gen = GenSymbol::e(i);
        else if (head == "f")
            node->gen = GenSymbol::f(i);
        else if (head == "w")
            node->gen = GenSymbol::w(i);
        else if (head == "wp")
            node->gen = GenSymbol::wp(i);
        else
            throw ParseError("unknown identifier '" + t.text + "'", t.pos);
        return node;
    }

    Lexer lex_;
    int n_;
    long ell_;
};

NCPoly eval_node(const ExprNode& node, const QGroup& ctx) {
    const long ell = ctx.ell();
    const int wo = ctx.working_order();
    switch (node.kind) {
        case ExprNode::Kind::Sum: {
            NCPoly acc(ell, wo);
            for (size_t k = 0; k < node.children.size(); ++k) {
                NCPoly c = eval_node(*node.children[k], ctx);
                if (node.signs[k] > 0)
                    acc += c;
                else
                    acc -= c;
            }
            return acc;
        }
        case ExprNode::Kind::Product: {
            NCPoly acc = NCPoly::unit(ell, wo);
            for (const auto& c : node.children) acc = acc * eval_node(*c, ctx);
            return acc;
        }
        case ExprNode::Kind::Power: {
            const ExprNode& base = *node.children[0];
            long k = node.exponent;
            if (base.kind == ExprNode::Kind::Gen && base.gen.group_like()) {
                Word w;
                GenSymbol g = base.gen;
                if (k < 0) g.power_sign = -g.power_sign;
                for (long m = 0; m < std::labs(k); ++m) w.letters.push_back(g);
                return NCPoly::monomial(w, LaurentScalar::one(ell, wo));
            }
            if (base.kind == ExprNode::Kind::Theta) {
                return NCPoly::monomial(
                    Word{}, LaurentScalar::from_cyc(CycScalar::theta_power(ell, k), wo));
            }
            if (base.kind == ExprNode::Kind::TVar) {
                return NCPoly::monomial(
                    Word{}, LaurentScalar::term(CycScalar::one(ell), static_cast<int>(k), wo));
            }
            if (base.kind == ExprNode::Kind::Number) {
                Rational v = base.value;
                if (k < 0) v = v.inverse();
                Rational acc(1);
                for (long m = 0; m < std::labs(k); ++m) acc *= v;
                return NCPoly::monomial(
                    Word{}, LaurentScalar::from_cyc(CycScalar::from_rational(ell, acc), wo));
            }
            NCPoly b = eval_node(base, ctx);
            if (k < 0) throw std::domain_error("cannot invert a general expression");
            NCPoly acc = NCPoly::unit(ell, wo);
            for (long m = 0; m < k; ++m) acc = acc * b;
            return acc;
        }
        case ExprNode::Kind::Number:
            return NCPoly::monomial(
                Word{},
                LaurentScalar::from_cyc(CycScalar::from_rational(ell, node.value), wo));
        case ExprNode::Kind::Theta:
            return NCPoly::monomial(
                Word{}, LaurentScalar::from_cyc(CycScalar::theta_power(ell, 1), wo));
        case ExprNode::Kind::TVar:
            return NCPoly::monomial(Word{},
                                    LaurentScalar::term(CycScalar::one(ell), 1, wo));
        case ExprNode::Kind::Gen:
            return NCPoly::generator(node.gen, ell, wo);
        case ExprNode::Kind::Macro:
            return ctx.root_vector_free(node.macro_side, node.macro_i, node.macro_j);
    }
    throw std::logic_error("eval_node: unreachable");
}

bool node_is_scalar(const ExprNode& node) {
    switch (node.kind) {
        case ExprNode::Kind::Gen:
        case ExprNode::Kind::Macro:
            return false;
        default:
            break;
    }
    for (const auto& c : node.children)
        if (!node_is_scalar(*c)) return false;
    return true;
}

}  // namespace

ExprAST parse_expr(const std::string& text, int n, long ell) {
    Parser parser(text, n, ell);
    return ExprAST{parser.parse(), text};
}

NCPoly eval_expr(const ExprAST& ast, const QGroup& ctx) {
    return eval_node(*ast.root, ctx);
}

LaurentScalar eval_scalar(const std::string& text, long ell, int working_order) {
    // a 2-generator dummy context suffices: scalar expressions never touch
    // the generators, and theta powers only need ell
    Parser parser(text, 2, ell);
    ExprAST ast{parser.parse(), text};
    if (!node_is_scalar(*ast.root))
        throw std::invalid_argument("expected a scalar expression: " + text);
    // evaluate without an engine: reuse eval through a throwaway context is
    // not possible for ell=1, so walk the tree directly
    struct ScalarEval {
        long ell;
        int wo;
        LaurentScalar eval(const ExprNode& n) const {
            switch (n.kind) {
                case ExprNode::Kind::Sum: {
                    LaurentScalar acc = LaurentScalar::zero(ell, wo);
                    for (size_t k = 0; k < n.children.size(); ++k) {
                        LaurentScalar c = eval(*n.children[k]);
                        if (n.signs[k] > 0)
                            acc += c;
                        else
                            acc -= c;
                    }
                    return acc;
                }
                case ExprNode::Kind::Product: {
                    LaurentScalar acc = LaurentScalar::one(ell, wo);
                    for (const auto& c : n.children) acc *= eval(*c);
                    return acc;
                }
                case ExprNode::Kind::Power: {
                    const ExprNode& base = *n.children[0];
                    if (base.kind == ExprNode::Kind::Theta)
                        return LaurentScalar::from_cyc(
                            CycScalar::theta_power(ell, n.exponent), wo);
                    if (base.kind == ExprNode::Kind::TVar)
                        return LaurentScalar::term(CycScalar::one(ell),
                                                   static_cast<int>(n.exponent), wo);
                    return eval(base).pow(n.exponent);
                }
                case ExprNode::Kind::Number:
                    return LaurentScalar::from_cyc(CycScalar::from_rational(ell, n.value), wo);
                case ExprNode::Kind::Theta:
                    return LaurentScalar::from_cyc(CycScalar::theta_power(ell, 1), wo);
                case ExprNode::Kind::TVar:
                    return LaurentScalar::term(CycScalar::one(ell), 1, wo);
                default:
                    throw std::invalid_argument("not a scalar expression");
            }
        }
    };
    return ScalarEval{ell, working_order}.eval(*ast.root);
}

}  // namespace qdeform
