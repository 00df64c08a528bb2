#pragma once

#include <map>
#include <memory>
#include <string>

namespace nlhopf {

/// Arithmetic expressions in one free variable `x` plus named constants,
/// used for custom initial profiles.  Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := ('-'|'+') unary | power
///   power  := atom ('^' unary)?
///   atom   := number | name | name '(' expr ')' | '(' expr ')'
/// Functions: sin cos tan exp log sqrt abs tanh cosh sinh.
class Expression {
public:
    struct Node;

    /// `constants` may bind names such as ell or L; `pi` is predefined.
    static Expression parse(const std::string& text, const std::map<std::string, double>& constants = {});

    double operator()(double x) const;
    const std::string& text() const { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace nlhopf
