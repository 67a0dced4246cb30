#include "wchaos/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace wchaos {

namespace {

using Fn = std::function<double(double, double)>;

struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    bool uses_t = false;
    bool uses_x = false;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("expression error at position " + std::to_string(pos) +
                                    ": " + what + " in '" + s + "'");
    }

    Fn parse_expression() {
        Fn lhs = parse_term();
        for (;;) {
            if (eat('+')) {
                Fn rhs = parse_term();
                lhs = [lhs, rhs](double t, double x) { return lhs(t, x) + rhs(t, x); };
            } else if (eat('-')) {
                Fn rhs = parse_term();
                lhs = [lhs, rhs](double t, double x) { return lhs(t, x) - rhs(t, x); };
            } else {
                return lhs;
            }
        }
    }

    Fn parse_term() {
        Fn lhs = parse_unary();
        for (;;) {
            if (eat('*')) {
                Fn rhs = parse_unary();
                lhs = [lhs, rhs](double t, double x) { return lhs(t, x) * rhs(t, x); };
            } else if (eat('/')) {
                Fn rhs = parse_unary();
                lhs = [lhs, rhs](double t, double x) { return lhs(t, x) / rhs(t, x); };
            } else {
                return lhs;
            }
        }
    }

    Fn parse_unary() {
        if (eat('-')) {
            Fn inner = parse_unary();
            return [inner](double t, double x) { return -inner(t, x); };
        }
        eat('+');
        return parse_power();
    }

    Fn parse_power() {
        Fn base = parse_primary();
        if (eat('^')) {
            Fn exp = parse_unary();  // right associative
            return [base, exp](double t, double x) { return std::pow(base(t, x), exp(t, x)); };
        }
        return base;
    }

    Fn parse_primary() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        const char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(s.substr(pos), &used);
            } catch (const std::exception&) {
                fail("bad numeric literal");
            }
            pos += used;
            return [v](double, double) { return v; };
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos;
            while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
            const std::string name = s.substr(pos, end - pos);
            pos = end;
            if (name == "t") {
                uses_t = true;
                return [](double t, double) { return t; };
            }
            if (name == "x") {
                uses_x = true;
                return [](double, double x) { return x; };
            }
            double (*f)(double) = nullptr;
            if (name == "sin") f = std::sin;
            else if (name == "cos") f = std::cos;
            else if (name == "exp") f = std::exp;
            else fail("unknown identifier '" + name + "'");
            if (!eat('(')) fail("expected '(' after '" + name + "'");
            Fn arg = parse_expression();
            if (!eat(')')) fail("expected ')'");
            return [f, arg](double t, double x) { return f(arg(t, x)); };
        }
        if (eat('(')) {
            Fn inner = parse_expression();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

Expr parse_expr(const std::string& text) {
    Parser p{text};
    Expr e;
    e.fn = p.parse_expression();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    e.uses_t = p.uses_t;
    e.uses_x = p.uses_x;
    return e;
}

}  // namespace wchaos
