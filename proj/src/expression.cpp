#include "fractcalc/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace fractcalc {

enum class NodeKind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Log, Sin };

struct Expression::Node {
    NodeKind kind;
    double number = 0.0;
    std::size_t var_index = 0;
    std::unique_ptr<Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr make(NodeKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_unique<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars)
        : text_(text), vars_(vars) {}

    NodePtr run() {
        auto node = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return node;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ExpressionError(what + " at position " + std::to_string(pos_), pos_);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) ++pos_;
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr expr() {
        auto node = term();
        while (true) {
            if (consume('+')) node = make(NodeKind::Add, std::move(node), term());
            else if (consume('-')) node = make(NodeKind::Sub, std::move(node), term());
            else return node;
        }
    }

    NodePtr term() {
        auto node = factor();
        while (true) {
            if (consume('*')) node = make(NodeKind::Mul, std::move(node), factor());
            else if (consume('/')) node = make(NodeKind::Div, std::move(node), factor());
            else return node;
        }
    }

    NodePtr factor() {
        if (consume('-')) return make(NodeKind::Negate, factor());
        auto base = primary();
        if (consume('^')) return make(NodeKind::Pow, std::move(base), factor());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (consume('(')) {
            auto node = expr();
            if (!consume(')')) fail("expected ')'");
            return node;
        }
        if (std::isdigit((unsigned char)c) || c == '.') return number();
        if (std::isalpha((unsigned char)c)) return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += std::size_t(end - begin);
        auto n = make(NodeKind::Number);
        n->number = value;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
            ++pos_;
        const std::string name = text_.substr(start, pos_ - start);
        if (name == "pi") {
            auto n = make(NodeKind::Number);
            n->number = M_PI;
            return n;
        }
        if (name == "log" || name == "sin") {
            if (!consume('(')) fail("expected '(' after function name");
            auto arg = expr();
            if (!consume(')')) fail("expected ')'");
            return make(name == "log" ? NodeKind::Log : NodeKind::Sin, std::move(arg));
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name) {
                auto n = make(NodeKind::Variable);
                n->var_index = i;
                return n;
            }
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }

    const std::string& text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

double eval_node(const Node& n, const std::vector<double>& values) {
    switch (n.kind) {
        case NodeKind::Number: return n.number;
        case NodeKind::Variable: return values[n.var_index];
        case NodeKind::Negate: return -eval_node(*n.lhs, values);
        case NodeKind::Add: return eval_node(*n.lhs, values) + eval_node(*n.rhs, values);
        case NodeKind::Sub: return eval_node(*n.lhs, values) - eval_node(*n.rhs, values);
        case NodeKind::Mul: return eval_node(*n.lhs, values) * eval_node(*n.rhs, values);
        case NodeKind::Div: return eval_node(*n.lhs, values) / eval_node(*n.rhs, values);
        case NodeKind::Pow: return std::pow(eval_node(*n.lhs, values), eval_node(*n.rhs, values));
        case NodeKind::Log: return std::log(eval_node(*n.lhs, values));
        case NodeKind::Sin: return std::sin(eval_node(*n.lhs, values));
    }
    return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
    Parser parser(text, variables);
    return Expression(parser.run(), variables);
}

double Expression::eval(const std::map<std::string, double>& bindings) const {
    std::vector<double> values(variables_.size(), 0.0);
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const auto it = bindings.find(variables_[i]);
        if (it != bindings.end()) values[i] = it->second;
    }
    return eval_node(*root_, values);
}

double Expression::eval1(double value) const {
    std::vector<double> values(variables_.size(), value);
    return eval_node(*root_, values);
}

Expression::Expression(std::unique_ptr<Node> root, std::vector<std::string> vars)
    : root_(std::move(root)), variables_(std::move(vars)) {}

Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::~Expression() = default;

}  // namespace fractcalc
