#include "nonlocal_hopf/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "nonlocal_hopf/errors.hpp"

namespace nlhopf {

struct Expression::Node {
    enum class Op { number, var, add, sub, mul, div, pow, neg, call } op = Op::number;
    double value = 0.0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr number(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
}

double (*lookup_fn(const std::string& name))(double) {
    static const std::vector<std::pair<std::string, double (*)(double)>> table = {
        {"sin", [](double a) { return std::sin(a); }},   {"cos", [](double a) { return std::cos(a); }},
        {"tan", [](double a) { return std::tan(a); }},   {"exp", [](double a) { return std::exp(a); }},
        {"log", [](double a) { return std::log(a); }},   {"sqrt", [](double a) { return std::sqrt(a); }},
        {"abs", [](double a) { return std::abs(a); }},   {"tanh", [](double a) { return std::tanh(a); }},
        {"cosh", [](double a) { return std::cosh(a); }}, {"sinh", [](double a) { return std::sinh(a); }},
    };
    for (const auto& [n, f] : table)
        if (n == name) return f;
    return nullptr;
}

class Parser {
public:
    Parser(const std::string& s, const std::map<std::string, double>& consts) : s_(s), consts_(consts) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(const char* msg) const {
        throw DomainError(std::string("expression '") + s_ + "': " + msg + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char ch) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr a = term();
        for (;;) {
            if (eat('+')) a = make(Op::add, a, term());
            else if (eat('-')) a = make(Op::sub, a, term());
            else return a;
        }
    }
    NodePtr term() {
        NodePtr a = unary();
        for (;;) {
            if (eat('*')) a = make(Op::mul, a, unary());
            else if (eat('/')) a = make(Op::div, a, unary());
            else return a;
        }
    }
    NodePtr unary() {
        if (eat('-')) return make(Op::neg, unary());
        if (eat('+')) return unary();
        return power();
    }
    NodePtr power() {
        NodePtr a = atom();
        if (eat('^')) return make(Op::pow, a, unary());
        return a;
    }
    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            NodePtr e = expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        const char ch = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return number(v);
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (eat('(')) {
                auto fn = lookup_fn(name);
                if (!fn) fail(("unknown function " + name).c_str());
                NodePtr arg = expr();
                if (!eat(')')) fail("missing ')'");
                auto n = std::make_shared<Expression::Node>();
                n->op = Op::call;
                n->fn = fn;
                n->lhs = arg;
                return n;
            }
            if (name == "x") return make(Op::var);
            if (name == "pi") return number(std::numbers::pi);
            if (auto it = consts_.find(name); it != consts_.end()) return number(it->second);
            fail(("unknown name " + name).c_str());
        }
        fail("unexpected character");
    }

    const std::string& s_;
    const std::map<std::string, double>& consts_;
    std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, double x) {
    switch (n.op) {
        case Op::number: return n.value;
        case Op::var: return x;
        case Op::add: return eval(*n.lhs, x) + eval(*n.rhs, x);
        case Op::sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
        case Op::mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
        case Op::div: return eval(*n.lhs, x) / eval(*n.rhs, x);
        case Op::pow: return std::pow(eval(*n.lhs, x), eval(*n.rhs, x));
        case Op::neg: return -eval(*n.lhs, x);
        case Op::call: return n.fn(eval(*n.lhs, x));
    }
    return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::map<std::string, double>& constants) {
    Expression e;
    e.root_ = Parser(text, constants).parse();
    e.text_ = text;
    return e;
}

double Expression::operator()(double x) const { return eval(*root_, x); }

}  // namespace nlhopf
