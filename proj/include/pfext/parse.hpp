#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "pfext/operator.hpp"

namespace pfext {

// Parser for operator and rational-function expressions in the variable t
// with derivation symbol D:
//
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := ('+'|'-')* power
//   power := atom ('^' nonnegative-integer)?
//   atom  := number | 'i' | 't' | 'D' | '(' expr ')'
//
// '*' is operator composition (ordinary multiplication when no D is
// involved); '/' requires a divisor of order zero.  Example:
// "t*(1-t)*D^2 + (1-2*t)*D - 1/4".
namespace parser_detail {

struct Token {
    enum Kind { Number, Imag, Var, Deriv, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    std::string text;
    std::size_t pos;
};

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t p = 0;
    while (p < src.size()) {
        const char c = src[p];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++p;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::size_t start = p;
            while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
            if (p < src.size() && src[p] == '.') {
                ++p;
                while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
            }
            if (p < src.size() && (src[p] == 'e' || src[p] == 'E')) {
                std::size_t q = p + 1;
                if (q < src.size() && (src[q] == '+' || src[q] == '-')) ++q;
                if (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) {
                    p = q;
                    while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
                }
            }
            out.push_back({Token::Number, src.substr(start, p - start), start});
            continue;
        }
        switch (c) {
            case 'i': out.push_back({Token::Imag, "i", p}); break;
            case 't': out.push_back({Token::Var, "t", p}); break;
            case 's': out.push_back({Token::Var, "s", p}); break;
            case 'D': out.push_back({Token::Deriv, "D", p}); break;
            case '+': out.push_back({Token::Plus, "+", p}); break;
            case '-': out.push_back({Token::Minus, "-", p}); break;
            case '*': out.push_back({Token::Star, "*", p}); break;
            case '/': out.push_back({Token::Slash, "/", p}); break;
            case '^': out.push_back({Token::Caret, "^", p}); break;
            case '(': out.push_back({Token::LParen, "(", p}); break;
            case ')': out.push_back({Token::RParen, ")", p}); break;
            default:
                throw ParseError("unexpected character '" + std::string(1, c) + "' at position " + std::to_string(p));
        }
        ++p;
    }
    out.push_back({Token::End, "", src.size()});
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src), tokens_(lex(src)) {}

    DifferentialOperator parse() {
        DifferentialOperator r = expr();
        expect(Token::End, "end of input");
        return r;
    }

private:
    const Token& peek() const { return tokens_[idx_]; }
    Token take() { return tokens_[idx_++]; }
    void expect(Token::Kind k, const std::string& what) {
        if (peek().kind != k)
            throw ParseError("expected " + what + " at position " + std::to_string(peek().pos) + " in \"" + src_ + "\"");
        ++idx_;
    }

    DifferentialOperator expr() {
        DifferentialOperator acc = term();
        while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
            const bool plus = take().kind == Token::Plus;
            DifferentialOperator rhs = term();
            acc = plus ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    DifferentialOperator term() {
        DifferentialOperator acc = unary();
        while (peek().kind == Token::Star || peek().kind == Token::Slash) {
            const bool mul = take().kind == Token::Star;
            const std::size_t at = peek().pos;
            DifferentialOperator rhs = unary();
            if (mul) {
                acc = compose(acc, rhs);
            } else {
                if (rhs.order() != 0)
                    throw ParseError("division by an operator of positive order at position " + std::to_string(at));
                if (rhs.coefficient(0).is_zero())
                    throw ParseError("division by zero at position " + std::to_string(at));
                acc = (RationalFunction(1.0) / rhs.coefficient(0)) * acc;
            }
        }
        return acc;
    }

    DifferentialOperator unary() {
        bool neg = false;
        while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
            if (take().kind == Token::Minus) neg = !neg;
        }
        DifferentialOperator r = power();
        if (neg) r = RationalFunction(-1.0) * r;
        return r;
    }

    DifferentialOperator power() {
        DifferentialOperator base = atom();
        if (peek().kind != Token::Caret) return base;
        take();
        if (peek().kind != Token::Number || peek().text.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("exponent must be a nonnegative integer at position " + std::to_string(peek().pos));
        const long e = std::stol(take().text);
        DifferentialOperator acc = DifferentialOperator::constant(RationalFunction(1.0));
        for (long k = 0; k < e; ++k) acc = compose(acc, base);
        return acc;
    }

    DifferentialOperator atom() {
        switch (peek().kind) {
            case Token::Number: {
                Token t = take();
                return DifferentialOperator::constant(RationalFunction(std::stod(t.text)));
            }
            case Token::Imag:
                take();
                return DifferentialOperator::constant(RationalFunction(cdouble(0.0, 1.0)));
            case Token::Var:
                take();
                return DifferentialOperator::constant(RationalFunction::variable());
            case Token::Deriv:
                take();
                return DifferentialOperator::derivative();
            case Token::LParen: {
                take();
                DifferentialOperator r = expr();
                expect(Token::RParen, "')'");
                return r;
            }
            default:
                throw ParseError("unexpected token at position " + std::to_string(peek().pos) + " in \"" + src_ + "\"");
        }
    }

    std::string src_;
    std::vector<Token> tokens_;
    std::size_t idx_ = 0;
};

}  // namespace parser_detail

inline DifferentialOperator parse_operator(const std::string& text) {
    return parser_detail::Parser(text).parse();
}

inline RationalFunction parse_rational(const std::string& text) {
    DifferentialOperator op = parser_detail::Parser(text).parse();
    if (op.order() != 0)
        throw ParseError("expected a rational function without D: \"" + text + "\"");
    return op.coefficient(0);
}

}  // namespace pfext
