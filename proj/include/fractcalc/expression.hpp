/*
 * expression.hpp — minimal closed-form expression evaluator
 *
 * Grammar: rational arithmetic (+ - * / and parentheses), powers with ^
 * (right associative), unary minus, the constant pi, named variables, and
 * the functions log and sin.  Parsed once into a small tree; evaluation
 * binds variables by name.
 */
#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractcalc {

struct ExpressionError : std::runtime_error {
    std::size_t position;
    ExpressionError(const std::string& what, std::size_t pos)
        : std::runtime_error(what), position(pos) {}
};

class Expression {
public:
    // Throws ExpressionError on malformed input; `variables` lists the
    // identifiers the expression may reference.
    static Expression parse(const std::string& text,
                            const std::vector<std::string>& variables);

    double eval(const std::map<std::string, double>& bindings) const;
    double eval1(double value) const;  // single-variable convenience

    Expression(Expression&&) noexcept;
    Expression& operator=(Expression&&) noexcept;
    ~Expression();

    struct Node;

private:
    explicit Expression(std::unique_ptr<Node> root, std::vector<std::string> vars);
    std::unique_ptr<Node> root_;
    std::vector<std::string> variables_;
};

}  // namespace fractcalc
