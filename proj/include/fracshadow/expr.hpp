#pragma once

// Expressions in one real variable `t`.
//
// Grammar (whitespace is insignificant):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = primary [ "^" unary ] ;            (right-associative)
//   primary = number | "t" | func "(" expr ")" | "(" expr ")" ;
//   func    = "sin" | "cos" | "exp" | "ln" | "sqrt" | "abs" | "sign" ;
//   number  = digits [ "." [ digits ] ] [ exponent ] | "." digits [ exponent ] ;
//   exponent= ( "e" | "E" ) [ "+" | "-" ] digits ;
//
// So `-t^2` is -(t^2), `2^3^2` is 2^(3^2) and `2^-t` is 2^(-t).

#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fracshadow/error.hpp"
#include "fracshadow/format.hpp"

namespace fracshadow {

enum class TokenKind { number, identifier, op, left_paren, right_paren, comma, end };

struct Token {
    TokenKind kind;
    std::string_view lexeme;
    std::size_t position;
};

enum class BinaryOp : char { add = '+', sub = '-', mul = '*', div = '/', pow = '^' };

enum class Function { sin, cos, exp, ln, sqrt, abs, sign };

inline std::string_view function_name(Function fn) {
    switch (fn) {
        case Function::sin: return "sin";
        case Function::cos: return "cos";
        case Function::exp: return "exp";
        case Function::ln: return "ln";
        case Function::sqrt: return "sqrt";
        case Function::abs: return "abs";
        case Function::sign: return "sign";
    }
    return "?";
}

struct ExprNode;

/// Immutable, shareable expression tree. Copies share structure.
class Expr {
public:
    static Expr constant(double value);
    static Expr variable();
    static Expr negate(Expr operand);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
    static Expr call(Function fn, Expr arg);

    const ExprNode& node() const noexcept { return *node_; }

    /// Same as eval(*this, t).
    double operator()(double t) const;

private:
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

    std::shared_ptr<const ExprNode> node_;
};

struct Constant {
    double value;
};
struct Variable {};
struct Negate {
    Expr operand;
};
struct Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
};
struct Call {
    Function fn;
    Expr arg;
};

struct ExprNode {
    std::variant<Constant, Variable, Negate, Binary, Call> value;
};

inline Expr Expr::constant(double value) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{Constant{value}}));
}
inline Expr Expr::variable() { return Expr(std::make_shared<const ExprNode>(ExprNode{Variable{}})); }
inline Expr Expr::negate(Expr operand) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{Negate{std::move(operand)}}));
}
inline Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{Binary{op, std::move(lhs), std::move(rhs)}}));
}
inline Expr Expr::call(Function fn, Expr arg) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{Call{fn, std::move(arg)}}));
}

/// Structural equality. Constants compare by value.
inline bool operator==(const Expr& a, const Expr& b) {
    if (&a.node() == &b.node()) return true;
    const auto& x = a.node().value;
    const auto& y = b.node().value;
    if (x.index() != y.index()) return false;
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(y);
            if constexpr (std::is_same_v<T, Constant>) {
                return lhs.value == rhs.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return true;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return lhs.operand == rhs.operand;
            } else if constexpr (std::is_same_v<T, Binary>) {
                return lhs.op == rhs.op && lhs.lhs == rhs.lhs && lhs.rhs == rhs.rhs;
            } else {
                return lhs.fn == rhs.fn && lhs.arg == rhs.arg;
            }
        },
        x);
}

// ---------------------------------------------------------------------------
// Lexer

inline std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    const auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    while (i < source.size()) {
        const char c = source[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < source.size() && is_digit(source[i + 1]))) {
            while (i < source.size() && is_digit(source[i])) ++i;
            if (i < source.size() && source[i] == '.') {
                ++i;
                while (i < source.size() && is_digit(source[i])) ++i;
            }
            if (i < source.size() && (source[i] == 'e' || source[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < source.size() && (source[j] == '+' || source[j] == '-')) ++j;
                if (j >= source.size() || !is_digit(source[j])) {
                    throw ParseError(ParseError::Kind::syntax, j, "exponent digits", "malformed number");
                }
                while (j < source.size() && is_digit(source[j])) ++j;
                i = j;
            }
            tokens.push_back({TokenKind::number, source.substr(start, i - start), start});
        } else if (is_alpha(c)) {
            while (i < source.size() && (is_alpha(source[i]) || is_digit(source[i]))) ++i;
            tokens.push_back({TokenKind::identifier, source.substr(start, i - start), start});
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            tokens.push_back({TokenKind::op, source.substr(start, 1), start});
            ++i;
        } else if (c == '(') {
            tokens.push_back({TokenKind::left_paren, source.substr(start, 1), start});
            ++i;
        } else if (c == ')') {
            tokens.push_back({TokenKind::right_paren, source.substr(start, 1), start});
            ++i;
        } else if (c == ',') {
            tokens.push_back({TokenKind::comma, source.substr(start, 1), start});
            ++i;
        } else {
            throw ParseError(ParseError::Kind::syntax, start, "number, identifier, operator or parenthesis",
                             std::string("unexpected character '") + c + "'");
        }
    }
    tokens.push_back({TokenKind::end, source.substr(source.size()), source.size()});
    return tokens;
}

// ---------------------------------------------------------------------------
// Parser: Pratt-style precedence climbing over the token stream.

namespace detail {

// Binding powers. Unary minus sits between the multiplicative operators and `^`.
inline constexpr int bp_additive = 10;
inline constexpr int bp_multiplicative = 20;
inline constexpr int bp_unary = 30;
inline constexpr int bp_power = 40;

class Parser {
public:
    explicit Parser(std::string_view source) : tokens_(tokenize(source)) {}

    Expr parse() {
        if (peek().kind == TokenKind::end) {
            throw ParseError(ParseError::Kind::syntax, peek().position, "expression", "empty expression");
        }
        Expr e = expression(0);
        if (peek().kind != TokenKind::end) {
            throw ParseError(ParseError::Kind::syntax, peek().position, "operator or end of input",
                             "unexpected '" + std::string(peek().lexeme) + "'");
        }
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    static int infix_power(const Token& tok) {
        if (tok.kind != TokenKind::op) return -1;
        switch (tok.lexeme[0]) {
            case '+':
            case '-': return bp_additive;
            case '*':
            case '/': return bp_multiplicative;
            case '^': return bp_power;
        }
        return -1;
    }

    Expr expression(int min_power) {
        Expr lhs = prefix();
        for (;;) {
            const Token& tok = peek();
            const int power = infix_power(tok);
            if (power < 0 || power < min_power || (power == min_power && tok.lexeme[0] != '^')) break;
            advance();
            const auto op = static_cast<BinaryOp>(tok.lexeme[0]);
            // `^` is right-associative and its exponent may start with a unary minus.
            Expr rhs = op == BinaryOp::pow ? expression(bp_power) : expression(power + 1);
            lhs = Expr::binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr prefix() {
        const Token& tok = advance();
        switch (tok.kind) {
            case TokenKind::number: {
                double value = 0.0;
                const auto* first = tok.lexeme.data();
                const auto* last = first + tok.lexeme.size();
                const auto [ptr, ec] = std::from_chars(first, last, value);
                if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
                    throw ParseError(ParseError::Kind::syntax, tok.position, "finite decimal literal",
                                     "number out of range");
                }
                return Expr::constant(value);
            }
            case TokenKind::identifier: return identifier(tok);
            case TokenKind::left_paren: {
                Expr inner = expression(0);
                expect(TokenKind::right_paren, "')'");
                return inner;
            }
            case TokenKind::op:
                if (tok.lexeme[0] == '-') return Expr::negate(expression(bp_unary));
                break;
            default: break;
        }
        if (tok.kind == TokenKind::end) {
            throw ParseError(ParseError::Kind::syntax, tok.position, "operand", "unexpected end of input");
        }
        throw ParseError(ParseError::Kind::syntax, tok.position, "operand",
                         "unexpected '" + std::string(tok.lexeme) + "'");
    }

    Expr identifier(const Token& tok) {
        if (tok.lexeme == "t") return Expr::variable();
        static constexpr Function all[] = {Function::sin, Function::cos, Function::exp, Function::ln,
                                           Function::sqrt, Function::abs, Function::sign};
        for (Function fn : all) {
            if (tok.lexeme == function_name(fn)) {
                expect(TokenKind::left_paren, "'(' after function name");
                Expr arg = expression(0);
                expect(TokenKind::right_paren, "')'");
                return Expr::call(fn, std::move(arg));
            }
        }
        throw ParseError(ParseError::Kind::unknown_identifier, tok.position, "t or a function name",
                         "unknown identifier '" + std::string(tok.lexeme) + "'");
    }

    void expect(TokenKind kind, const char* what) {
        const Token& tok = peek();
        if (tok.kind != kind) {
            const std::string found = tok.kind == TokenKind::end ? "end of input" : "'" + std::string(tok.lexeme) + "'";
            throw ParseError(ParseError::Kind::syntax, tok.position, what,
                             std::string("expected ") + what + ", found " + found);
        }
        advance();
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view source) { return detail::Parser(source).parse(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline double checked(double value, const char* what) {
    if (!std::isfinite(value)) throw DomainError(std::string(what) + " produced a non-finite value");
    return value;
}

}  // namespace detail

/// Evaluates `e` at `t`. Throws DomainError on ln/sqrt outside their domain
/// and whenever an intermediate result is not finite.
inline double eval(const Expr& e, double t) {
    if (!std::isfinite(t)) throw DomainError("evaluation point is not finite");
    return std::visit(
        [t](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return t;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return -eval(n.operand, t);
            } else if constexpr (std::is_same_v<T, Binary>) {
                const double a = eval(n.lhs, t);
                const double b = eval(n.rhs, t);
                switch (n.op) {
                    case BinaryOp::add: return detail::checked(a + b, "addition");
                    case BinaryOp::sub: return detail::checked(a - b, "subtraction");
                    case BinaryOp::mul: return detail::checked(a * b, "multiplication");
                    case BinaryOp::div: return detail::checked(a / b, "division");
                    case BinaryOp::pow: return detail::checked(std::pow(a, b), "power");
                }
                return 0.0;
            } else {
                const double x = eval(n.arg, t);
                switch (n.fn) {
                    case Function::sin: return std::sin(x);
                    case Function::cos: return std::cos(x);
                    case Function::exp: return detail::checked(std::exp(x), "exp");
                    case Function::ln:
                        if (!(x > 0.0)) throw DomainError("ln of non-positive argument " + format_real(x));
                        return std::log(x);
                    case Function::sqrt:
                        if (x < 0.0) throw DomainError("sqrt of negative argument " + format_real(x));
                        return std::sqrt(x);
                    case Function::abs: return std::abs(x);
                    case Function::sign: return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
                }
                return 0.0;
            }
        },
        e.node().value);
}

inline double Expr::operator()(double t) const { return eval(*this, t); }

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return n.value < 0.0 || std::signbit(n.value) ? bp_unary : bp_power + 1;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return bp_unary;
            } else if constexpr (std::is_same_v<T, Binary>) {
                switch (n.op) {
                    case BinaryOp::add:
                    case BinaryOp::sub: return bp_additive;
                    case BinaryOp::mul:
                    case BinaryOp::div: return bp_multiplicative;
                    case BinaryOp::pow: return bp_power;
                }
                return 0;
            } else {
                return bp_power + 1;
            }
        },
        e.node().value);
}

inline void print(const Expr& e, int min_precedence, std::string& out) {
    const bool parens = precedence(e) < min_precedence;
    if (parens) out += '(';
    std::visit(
        [&out](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                out += format_real(n.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                out += 't';
            } else if constexpr (std::is_same_v<T, Negate>) {
                out += '-';
                print(n.operand, bp_unary, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                switch (n.op) {
                    case BinaryOp::add:
                    case BinaryOp::sub:
                        print(n.lhs, bp_additive, out);
                        out += n.op == BinaryOp::add ? " + " : " - ";
                        print(n.rhs, bp_additive + 1, out);
                        break;
                    case BinaryOp::mul:
                    case BinaryOp::div:
                        print(n.lhs, bp_multiplicative, out);
                        out += static_cast<char>(n.op);
                        print(n.rhs, bp_multiplicative + 1, out);
                        break;
                    case BinaryOp::pow:
                        print(n.lhs, bp_power + 1, out);
                        out += '^';
                        print(n.rhs, bp_unary, out);
                        break;
                }
            } else {
                out += function_name(n.fn);
                out += '(';
                print(n.arg, 0, out);
                out += ')';
            }
        },
        e.node().value);
    if (parens) out += ')';
}

}  // namespace detail

/// Renders `e` with the minimal parentheses needed for parse(to_string(e)) == e.
inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print(e, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Symbolic differentiation

namespace detail {

inline const double* as_constant(const Expr& e) {
    const auto* c = std::get_if<Constant>(&e.node().value);
    return c ? &c->value : nullptr;
}

inline bool is_value(const Expr& e, double v) {
    const double* c = as_constant(e);
    return c && *c == v;
}

inline Expr fold(BinaryOp op, Expr a, Expr b) {
    const double* x = as_constant(a);
    const double* y = as_constant(b);
    if (x && y) {
        double r = 0.0;
        switch (op) {
            case BinaryOp::add: r = *x + *y; break;
            case BinaryOp::sub: r = *x - *y; break;
            case BinaryOp::mul: r = *x * *y; break;
            case BinaryOp::div: r = *x / *y; break;
            case BinaryOp::pow: r = std::pow(*x, *y); break;
        }
        if (std::isfinite(r)) return Expr::constant(r);
    }
    switch (op) {
        case BinaryOp::add:
            if (is_value(a, 0.0)) return b;
            if (is_value(b, 0.0)) return a;
            break;
        case BinaryOp::sub:
            if (is_value(b, 0.0)) return a;
            break;
        case BinaryOp::mul:
            if (is_value(a, 0.0) || is_value(b, 0.0)) return Expr::constant(0.0);
            if (is_value(a, 1.0)) return b;
            if (is_value(b, 1.0)) return a;
            break;
        case BinaryOp::div:
            if (is_value(a, 0.0)) return Expr::constant(0.0);
            if (is_value(b, 1.0)) return a;
            break;
        case BinaryOp::pow:
            if (is_value(b, 1.0)) return a;
            if (is_value(b, 0.0)) return Expr::constant(1.0);
            break;
    }
    return Expr::binary(op, std::move(a), std::move(b));
}

inline Expr add(Expr a, Expr b) { return fold(BinaryOp::add, std::move(a), std::move(b)); }
inline Expr sub(Expr a, Expr b) { return fold(BinaryOp::sub, std::move(a), std::move(b)); }
inline Expr mul(Expr a, Expr b) { return fold(BinaryOp::mul, std::move(a), std::move(b)); }
inline Expr div(Expr a, Expr b) { return fold(BinaryOp::div, std::move(a), std::move(b)); }
inline Expr pow(Expr a, Expr b) { return fold(BinaryOp::pow, std::move(a), std::move(b)); }
inline Expr neg(Expr a) {
    if (const double* c = as_constant(a)) return Expr::constant(-*c);
    return Expr::negate(std::move(a));
}
inline Expr num(double v) { return Expr::constant(v); }

inline bool depends_on_t(const Expr& e) {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) return false;
            else if constexpr (std::is_same_v<T, Variable>) return true;
            else if constexpr (std::is_same_v<T, Negate>) return depends_on_t(n.operand);
            else if constexpr (std::is_same_v<T, Binary>) return depends_on_t(n.lhs) || depends_on_t(n.rhs);
            else return depends_on_t(n.arg);
        },
        e.node().value);
}

inline Expr derive(const Expr& e) {
    return std::visit(
        [&e](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return num(0.0);
            } else if constexpr (std::is_same_v<T, Variable>) {
                return num(1.0);
            } else if constexpr (std::is_same_v<T, Negate>) {
                return neg(derive(n.operand));
            } else if constexpr (std::is_same_v<T, Binary>) {
                const Expr& u = n.lhs;
                const Expr& v = n.rhs;
                switch (n.op) {
                    case BinaryOp::add: return add(derive(u), derive(v));
                    case BinaryOp::sub: return sub(derive(u), derive(v));
                    case BinaryOp::mul: return add(mul(derive(u), v), mul(u, derive(v)));
                    case BinaryOp::div:
                        return div(sub(mul(derive(u), v), mul(u, derive(v))), pow(v, num(2.0)));
                    case BinaryOp::pow: {
                        const Expr du = derive(u);
                        const Expr dv = derive(v);
                        if (!depends_on_t(v)) {
                            // d(u^c) = c * u^(c-1) * u'
                            return mul(mul(v, pow(u, sub(v, num(1.0)))), du);
                        }
                        if (!depends_on_t(u)) {
                            // d(c^v) = c^v * ln(c) * v'
                            return mul(mul(e, Expr::call(Function::ln, u)), dv);
                        }
                        // d(u^v) = u^v * (v' ln u + v u'/u)
                        return mul(e, add(mul(dv, Expr::call(Function::ln, u)), div(mul(v, du), u)));
                    }
                }
                return num(0.0);
            } else {
                const Expr& u = n.arg;
                switch (n.fn) {
                    case Function::sin: return mul(Expr::call(Function::cos, u), derive(u));
                    case Function::cos: return mul(neg(Expr::call(Function::sin, u)), derive(u));
                    case Function::exp: return mul(e, derive(u));
                    case Function::ln: return div(derive(u), u);
                    case Function::sqrt: return div(derive(u), mul(num(2.0), e));
                    case Function::abs:
                    case Function::sign:
                        throw NonDifferentiableError(std::string(function_name(n.fn)) +
                                                     " is not differentiable");
                }
                return num(0.0);
            }
        },
        e.node().value);
}

inline bool contains_nondifferentiable(const Expr& e) {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Negate>) return contains_nondifferentiable(n.operand);
            else if constexpr (std::is_same_v<T, Binary>)
                return contains_nondifferentiable(n.lhs) || contains_nondifferentiable(n.rhs);
            else if constexpr (std::is_same_v<T, Call>)
                return n.fn == Function::abs || n.fn == Function::sign || contains_nondifferentiable(n.arg);
            else return false;
        },
        e.node().value);
}

}  // namespace detail

/// Exact derivative with respect to t. Throws NonDifferentiableError if `e`
/// contains abs or sign anywhere.
inline Expr differentiate(const Expr& e) {
    if (detail::contains_nondifferentiable(e)) {
        throw NonDifferentiableError("expression contains abs or sign: " + to_string(e));
    }
    return detail::derive(e);
}

}  // namespace fracshadow
