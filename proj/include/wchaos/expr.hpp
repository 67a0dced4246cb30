#ifndef WCHAOS_EXPR_HPP
#define WCHAOS_EXPR_HPP

#include <functional>
#include <string>

namespace wchaos {

// A parsed coefficient expression over the variables t and x.
struct Expr {
    std::function<double(double t, double x)> fn;
    bool uses_t = false;
    bool uses_x = false;

    double operator()(double t, double x) const { return fn(t, x); }
};

// Minimal arithmetic grammar: + - * / ^, parentheses, numeric literals,
// variables t and x, functions sin, cos, exp.  Throws std::invalid_argument
// with the offending position on malformed input.
Expr parse_expr(const std::string& text);

}  // namespace wchaos

#endif
