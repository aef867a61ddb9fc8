#pragma once

// Scalar functions of time: a tiny arithmetic expression language used for
// time-varying coefficients, delay functions and initial histories.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 't' | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | abs | sqrt

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ddestab {

enum class ExprKind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs, Sqrt };

/// Immutable expression tree node. Number literals are always finite and
/// nonnegative; a leading minus is a separate Neg node.
struct ExprNode {
    ExprKind kind;
    double value = 0.0;  // Number only
    std::shared_ptr<const ExprNode> lhs;  // operand of unary nodes
    std::shared_ptr<const ExprNode> rhs;

    friend bool operator==(const ExprNode& a, const ExprNode& b);
};

using ExprPtr = std::shared_ptr<const ExprNode>;

ExprPtr make_number(double value);
ExprPtr make_var();
ExprPtr make_unary(ExprKind kind, ExprPtr operand);
ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs);

/// Canonical text for a tree; parse(format(e)) is structurally equal to e.
std::string format(const ExprNode& node);

class ScalarFn {
public:
    /// Identically zero.
    ScalarFn();

    static ScalarFn parse(std::string_view text);
    static ScalarFn constant(double value);
    static ScalarFn from_tree(ExprPtr root);

    /// Throws EvalError on division by zero or a non-finite result.
    double operator()(double t) const;
    double eval(double t) const { return (*this)(t); }

    /// True when the tree does not reference `t`.
    bool is_constant() const noexcept { return constant_; }

    const ExprNode& tree() const noexcept { return *root_; }
    const ExprPtr& root() const noexcept { return root_; }
    const std::string& source() const noexcept { return source_; }

    friend bool operator==(const ScalarFn& a, const ScalarFn& b) { return *a.root_ == *b.root_; }

private:
    struct Instr {
        ExprKind op;
        double value;
    };

    ScalarFn(ExprPtr root, std::string source);
    void compile();

    ExprPtr root_;
    std::string source_;
    std::vector<Instr> program_;  // postfix form of root_
    std::size_t stack_depth_ = 0;
    bool constant_ = true;
};

/// |f(t)| as a new function sharing f's tree.
ScalarFn abs_of(const ScalarFn& f);

}  // namespace ddestab
