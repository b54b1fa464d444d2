#pragma once

#include "daniell/types.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace daniell {

/// Syntax error or unknown identifier, with the byte offset into the source text.
class ParseError : public DomainError {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& message);

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// log or sqrt of a negative, division by zero, or another non-finite result.
class DomainFault : public DomainError {
public:
    using DomainError::DomainError;
};

enum class ExprKind { number, constant, variable, negate, call, add, sub, mul, div, pow };

struct ExprNode {
    ExprKind kind = ExprKind::number;
    Rational number;    // number literals, exact
    double approx = 0;  // number rounded once at parse time
    std::string name;   // constant, variable or function name
    int slot = -1;      // variable position in the declared list
    std::vector<std::shared_ptr<const ExprNode>> args;
};

/**
 * Expression over rational literals, pi, e, the declared variables and the
 * functions abs, sqrt, exp, log, sin, cos, tan, atan (one or two arguments),
 * sinc. Binary + - * / ^ with ^ right-associative; unary minus applies to a
 * whole power, so -x^2 is -(x^2). "3/4" without spaces is one exact literal.
 * sin(u)/u is folded into sinc(u).
 */
class Expr {
public:
    /// All variable names of the grammar, in slot order when none are declared.
    static const std::vector<std::string>& grammar_variables();

    /// Each declared name must be one of grammar_variables().
    static Expr parse(std::string_view text, std::vector<std::string> variables = {});

    const std::vector<std::string>& variables() const { return vars_; }
    const ExprNode& root() const { return *root_; }
    std::set<std::string> free_variables() const;

    /// values[i] binds variables()[i]. Domain faults give NaN.
    double eval(std::span<const double> values) const;
    /// Named bindings; faults throw DomainFault, unbound variables DomainError.
    double evaluate(const std::map<std::string, double>& bindings) const;

    /// Fully parenthesized text that parses back to the same tree.
    std::string print() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    std::shared_ptr<const ExprNode> root_;
    std::vector<std::string> vars_;
};

bool structurally_equal(const ExprNode& a, const ExprNode& b);

/// f(x) for an expression with exactly one declared variable.
Function1 to_function(const Expr& e);
/// f(v) with v[i] bound to variables()[i].
Integrand to_integrand(const Expr& e);

/**
 * Lipschitz constant (Euclidean) over a bounded box when the expression is a
 * polynomial in its variables: the gradient component j is bounded by the sum
 * of |c| alpha_j prod R_i^(alpha_i - [i = j]) with R_i = max |x_i| on the box.
 * Empty for anything that is not a polynomial.
 */
std::optional<double> polynomial_lipschitz(const Expr& e, const Box& box);

}  // namespace daniell
