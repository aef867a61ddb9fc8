#include "ddestab/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "ddestab/errors.hpp"

namespace ddestab {

bool operator==(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == ExprKind::Number) return a.value == b.value;
    auto same = [](const ExprPtr& x, const ExprPtr& y) {
        if (!x || !y) return !x && !y;
        return *x == *y;
    };
    return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}

ExprPtr make_number(double value) {
    return std::make_shared<const ExprNode>(ExprNode{ExprKind::Number, value, nullptr, nullptr});
}

ExprPtr make_var() { return std::make_shared<const ExprNode>(ExprNode{ExprKind::Var, 0.0, nullptr, nullptr}); }

ExprPtr make_unary(ExprKind kind, ExprPtr operand) {
    return std::make_shared<const ExprNode>(ExprNode{kind, 0.0, std::move(operand), nullptr});
}

ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
    return std::make_shared<const ExprNode>(ExprNode{kind, 0.0, std::move(lhs), std::move(rhs)});
}

namespace {

struct FunctionName {
    std::string_view name;
    ExprKind kind;
};

constexpr std::array<FunctionName, 5> kFunctions{{
    {"sin", ExprKind::Sin},
    {"cos", ExprKind::Cos},
    {"exp", ExprKind::Exp},
    {"abs", ExprKind::Abs},
    {"sqrt", ExprKind::Sqrt},
}};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr parse_all() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = make_binary(ExprKind::Add, lhs, parse_term());
            else if (accept('-'))
                lhs = make_binary(ExprKind::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = make_binary(ExprKind::Mul, lhs, parse_unary());
            else if (accept('/'))
                lhs = make_binary(ExprKind::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    ExprPtr parse_unary() {
        if (accept('-')) return make_unary(ExprKind::Neg, parse_unary());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (accept('^')) return make_binary(ExprKind::Pow, base, parse_unary());
        return base;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr inner = parse_expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (is_digit(c) || c == '.') return parse_number();
        if (is_alpha(c)) return parse_identifier();
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    ExprPtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && is_digit(text_[p])) {
                pos_ = p;
                while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
            } else {
                throw ParseError("malformed exponent", p);
            }
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) throw ParseError("malformed number", start);
        if (!std::isfinite(value)) throw ParseError("number literal out of range", start);
        return make_number(value);
    }

    ExprPtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_]))) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "t") return make_var();
        for (const auto& fn : kFunctions) {
            if (fn.name == name) {
                if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
                ExprPtr arg = parse_expr();
                if (!accept(')')) throw ParseError("expected ')'", pos_);
                return make_unary(fn.kind, arg);
            }
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string_view function_name(ExprKind kind) {
    for (const auto& fn : kFunctions)
        if (fn.kind == kind) return fn.name;
    return {};
}

char operator_symbol(ExprKind kind) {
    switch (kind) {
        case ExprKind::Add: return '+';
        case ExprKind::Sub: return '-';
        case ExprKind::Mul: return '*';
        case ExprKind::Div: return '/';
        case ExprKind::Pow: return '^';
        default: return '?';
    }
}

void format_into(const ExprNode& node, std::string& out) {
    switch (node.kind) {
        case ExprKind::Number: {
            std::array<char, 32> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), node.value);
            out.append(buf.data(), ptr);
            return;
        }
        case ExprKind::Var:
            out += 't';
            return;
        case ExprKind::Neg:
            out += "(-";
            format_into(*node.lhs, out);
            out += ')';
            return;
        case ExprKind::Add:
        case ExprKind::Sub:
        case ExprKind::Mul:
        case ExprKind::Div:
        case ExprKind::Pow:
            out += '(';
            format_into(*node.lhs, out);
            out += ' ';
            out += operator_symbol(node.kind);
            out += ' ';
            format_into(*node.rhs, out);
            out += ')';
            return;
        default:
            out += function_name(node.kind);
            out += '(';
            format_into(*node.lhs, out);
            out += ')';
            return;
    }
}

}  // namespace

std::string format(const ExprNode& node) {
    std::string out;
    format_into(node, out);
    return out;
}

ScalarFn::ScalarFn() : ScalarFn(make_number(0.0), "0") {}

ScalarFn::ScalarFn(ExprPtr root, std::string source) : root_(std::move(root)), source_(std::move(source)) {
    compile();
}

ScalarFn ScalarFn::parse(std::string_view text) {
    Parser parser(text);
    return ScalarFn(parser.parse_all(), std::string(text));
}

ScalarFn ScalarFn::constant(double value) {
    if (!std::isfinite(value)) throw DomainError("constant function value must be finite");
    ExprPtr root = make_number(std::fabs(value));
    if (std::signbit(value)) root = make_unary(ExprKind::Neg, root);
    return from_tree(std::move(root));
}

ScalarFn ScalarFn::from_tree(ExprPtr root) {
    std::string text = format(*root);
    return ScalarFn(std::move(root), std::move(text));
}

void ScalarFn::compile() {
    program_.clear();
    constant_ = true;
    std::size_t depth = 0;
    auto emit = [&](auto&& self, const ExprNode& node) -> void {
        switch (node.kind) {
            case ExprKind::Number:
            case ExprKind::Var:
                if (node.kind == ExprKind::Var) constant_ = false;
                program_.push_back({node.kind, node.value});
                ++depth;
                stack_depth_ = std::max(stack_depth_, depth);
                return;
            case ExprKind::Add:
            case ExprKind::Sub:
            case ExprKind::Mul:
            case ExprKind::Div:
            case ExprKind::Pow:
                self(self, *node.lhs);
                self(self, *node.rhs);
                program_.push_back({node.kind, 0.0});
                --depth;
                return;
            default:
                self(self, *node.lhs);
                program_.push_back({node.kind, 0.0});
                return;
        }
    };
    stack_depth_ = 0;
    emit(emit, *root_);
}

double ScalarFn::operator()(double t) const {
    constexpr std::size_t kInlineDepth = 32;
    std::array<double, kInlineDepth> inline_stack{};
    std::vector<double> heap_stack;
    double* stack = inline_stack.data();
    if (stack_depth_ > kInlineDepth) {
        heap_stack.resize(stack_depth_);
        stack = heap_stack.data();
    }

    std::size_t sp = 0;
    for (const Instr& in : program_) {
        switch (in.op) {
            case ExprKind::Number: stack[sp++] = in.value; break;
            case ExprKind::Var: stack[sp++] = t; break;
            case ExprKind::Neg: stack[sp - 1] = -stack[sp - 1]; break;
            case ExprKind::Sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
            case ExprKind::Cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
            case ExprKind::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
            case ExprKind::Abs: stack[sp - 1] = std::fabs(stack[sp - 1]); break;
            case ExprKind::Sqrt: stack[sp - 1] = std::sqrt(stack[sp - 1]); break;
            case ExprKind::Add: --sp; stack[sp - 1] += stack[sp]; break;
            case ExprKind::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
            case ExprKind::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
            case ExprKind::Div:
                --sp;
                if (stack[sp] == 0.0) throw EvalError("division by zero in '" + source_ + "'");
                stack[sp - 1] /= stack[sp];
                break;
            case ExprKind::Pow: --sp; stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]); break;
        }
    }
    const double result = stack[0];
    if (!std::isfinite(result)) throw EvalError("non-finite value of '" + source_ + "' at t=" + std::to_string(t));
    return result;
}

ScalarFn abs_of(const ScalarFn& f) { return ScalarFn::from_tree(make_unary(ExprKind::Abs, f.root())); }

}  // namespace ddestab
