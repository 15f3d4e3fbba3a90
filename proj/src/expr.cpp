#include "dpde/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dpde {

namespace detail {

enum class Op {
    Const, Var, Neg, Add, Sub, Mul, Div, Pow, PowInt, Exp, Sin, Cos, Sqrt, Abs,
};

struct Node {
    Op op;
    double value = 0.0;  // Const
    int slot = -1;       // Var
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

struct Instruction {
    Op op;
    double value = 0.0;
    int arg = 0;  // variable slot, or exponent for PowInt
};

}  // namespace detail

using detail::Instruction;
using detail::Node;
using detail::Op;

namespace {

using NodePtr = std::shared_ptr<const Node>;

struct FunctionName {
    std::string_view name;
    Op op;
};

constexpr std::array<FunctionName, 5> kFunctions{{
    {"exp", Op::Exp}, {"sin", Op::Sin}, {"cos", Op::Cos}, {"sqrt", Op::Sqrt}, {"abs", Op::Abs},
}};

NodePtr make_const(double v) { return std::make_shared<Node>(Node{Op::Const, v, -1, {}, {}}); }
NodePtr make_var(int slot) { return std::make_shared<Node>(Node{Op::Var, 0.0, slot, {}, {}}); }
NodePtr make_unary(Op op, NodePtr arg) {
    return std::make_shared<Node>(Node{op, 0.0, -1, std::move(arg), {}});
}
NodePtr make_binary(Op op, NodePtr l, NodePtr r) {
    return std::make_shared<Node>(Node{op, 0.0, -1, std::move(l), std::move(r)});
}

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError(pos_, "empty expression");
        NodePtr root = expression();
        skip_ws();
        if (pos_ < text_.size()) {
            throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
        }
        return root;
    }

private:
    std::string_view text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make_binary(Op::Add, lhs, term());
            else if (accept('-')) lhs = make_binary(Op::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make_binary(Op::Mul, lhs, unary());
            else if (accept('/')) lhs = make_binary(Op::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make_unary(Op::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make_binary(Op::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expression();
            if (!accept(')')) throw ParseError(pos_, "expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(pos_, std::string("expected operand, found '") + c + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa_digits = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa_digits += digits();
        }
        if (mantissa_digits == 0) throw ParseError(start, "malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            const std::size_t exp_start = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) throw ParseError(exp_start, "malformed exponent");
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc() || ptr != text_.data() + pos_) {
            throw ParseError(start, "number out of range");
        }
        return make_const(value);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        skip_ws();
        const bool call = pos_ < text_.size() && text_[pos_] == '(';
        for (const auto& f : kFunctions) {
            if (f.name == name) {
                if (!call) throw ParseError(pos_, "expected '(' after function " + std::string(name));
                ++pos_;
                NodePtr arg = expression();
                if (!accept(')')) throw ParseError(pos_, "expected ')'");
                return make_unary(f.op, arg);
            }
        }
        if (call) throw ParseError(start, "unknown function '" + std::string(name) + "'");
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name) return make_var(static_cast<int>(i));
        }
        std::string allowed;
        for (const auto& v : vars_) allowed += (allowed.empty() ? "" : ", ") + v;
        throw Error(ErrorKind::UnknownVariable,
                    "unknown variable '" + std::string(name) + "' at offset " +
                        std::to_string(start) + " (allowed: " + allowed + ")");
    }
};

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string_view op_symbol(Op op) {
    switch (op) {
        case Op::Add: return "+";
        case Op::Sub: return "-";
        case Op::Mul: return "*";
        case Op::Div: return "/";
        case Op::Pow: return "^";
        default: return "?";
    }
}

std::string render(const Node& n, const std::vector<std::string>& vars) {
    switch (n.op) {
        case Op::Const: return format_number(n.value);
        case Op::Var: return vars[n.slot];
        case Op::Neg: return "(-" + render(*n.lhs, vars) + ")";
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow:
            return "(" + render(*n.lhs, vars) + std::string(op_symbol(n.op)) +
                   render(*n.rhs, vars) + ")";
        default:
            for (const auto& f : kFunctions) {
                if (f.op == n.op) return std::string(f.name) + "(" + render(*n.lhs, vars) + ")";
            }
            return "?";
    }
}

// Post-order emission; returns the stack depth needed for this subtree.
int emit(const Node& n, std::vector<Instruction>& out, unsigned long long& used) {
    switch (n.op) {
        case Op::Const:
            out.push_back({Op::Const, n.value, 0});
            return 1;
        case Op::Var:
            out.push_back({Op::Var, 0.0, n.slot});
            used |= 1ULL << n.slot;
            return 1;
        case Op::Pow:
            if (n.rhs->op == Op::Const && n.rhs->value == std::trunc(n.rhs->value) &&
                std::abs(n.rhs->value) <= 8.0) {
                const int d = emit(*n.lhs, out, used);
                out.push_back({Op::PowInt, 0.0, static_cast<int>(n.rhs->value)});
                return d;
            }
            [[fallthrough]];
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            const int dl = emit(*n.lhs, out, used);
            const int dr = emit(*n.rhs, out, used);
            out.push_back({n.op, 0.0, 0});
            return std::max(dl, dr + 1);
        }
        default: {
            const int d = emit(*n.lhs, out, used);
            out.push_back({n.op, 0.0, 0});
            return d;
        }
    }
}

[[noreturn]] void domain_error(const char* what) { throw Error(ErrorKind::EvalDomainError, what); }

double checked_div(double num, double den) {
    if (den == 0.0) domain_error("division by zero");
    return num / den;
}

double int_power(double base, int exponent) {
    if (exponent == 0) return 1.0;
    if (exponent < 0 && base == 0.0) domain_error("division by zero in negative power of 0");
    double result = base;
    for (int k = 1; k < std::abs(exponent); ++k) result *= base;
    return exponent < 0 ? 1.0 / result : result;
}

double real_power(double base, double exponent) {
    if (base < 0.0 && exponent != std::trunc(exponent)) {
        domain_error("non-integer power of a negative number");
    }
    if (base == 0.0 && exponent < 0.0) domain_error("division by zero in negative power of 0");
    return std::pow(base, exponent);
}

double run(std::span<const Instruction> program, std::span<const double> args, double* stack) {
    int top = -1;
    for (const Instruction& ins : program) {
        switch (ins.op) {
            case Op::Const: stack[++top] = ins.value; break;
            case Op::Var: stack[++top] = args[ins.arg]; break;
            case Op::Neg: stack[top] = -stack[top]; break;
            case Op::Add: --top; stack[top] = stack[top] + stack[top + 1]; break;
            case Op::Sub: --top; stack[top] = stack[top] - stack[top + 1]; break;
            case Op::Mul: --top; stack[top] = stack[top] * stack[top + 1]; break;
            case Op::Div: --top; stack[top] = checked_div(stack[top], stack[top + 1]); break;
            case Op::Pow: --top; stack[top] = real_power(stack[top], stack[top + 1]); break;
            case Op::PowInt: stack[top] = int_power(stack[top], ins.arg); break;
            case Op::Exp: stack[top] = std::exp(stack[top]); break;
            case Op::Sin: stack[top] = std::sin(stack[top]); break;
            case Op::Cos: stack[top] = std::cos(stack[top]); break;
            case Op::Sqrt:
                if (stack[top] < 0.0) domain_error("sqrt of a negative number");
                stack[top] = std::sqrt(stack[top]);
                break;
            case Op::Abs: stack[top] = std::abs(stack[top]); break;
        }
    }
    return stack[0];
}

}  // namespace

CoefficientExpr::CoefficientExpr() : source_("0"), root_(make_const(0.0)) { compile(); }

CoefficientExpr CoefficientExpr::parse(std::string_view text, std::vector<std::string> variables) {
    if (variables.size() > 64) throw Error(ErrorKind::InvalidArgument, "too many variables");
    CoefficientExpr e;
    e.variables_ = std::move(variables);
    e.source_ = std::string(text);
    e.root_ = Parser(text, e.variables_).parse();
    e.compile();
    return e;
}

CoefficientExpr CoefficientExpr::constant(double value, std::vector<std::string> variables) {
    CoefficientExpr e;
    e.variables_ = std::move(variables);
    e.root_ = make_const(value);
    e.source_ = format_number(value);
    e.compile();
    return e;
}

void CoefficientExpr::compile() {
    auto program = std::make_shared<std::vector<Instruction>>();
    used_mask_ = 0;
    max_depth_ = emit(*root_, *program, used_mask_);
    program_ = std::move(program);
}

double CoefficientExpr::evaluate(std::span<const double> args) const {
    if (args.size() < variables_.size()) {
        throw Error(ErrorKind::InvalidArgument, "expression '" + source_ + "' expects " +
                                                    std::to_string(variables_.size()) +
                                                    " arguments");
    }
    if (max_depth_ <= 32) {
        std::array<double, 32> stack;
        return run(*program_, args, stack.data());
    }
    std::vector<double> stack(static_cast<std::size_t>(max_depth_));
    return run(*program_, args, stack.data());
}

bool CoefficientExpr::depends_on(std::string_view variable) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i] == variable) return (used_mask_ >> i) & 1ULL;
    }
    return false;
}

std::string CoefficientExpr::to_string() const { return render(*root_, variables_); }

CoefficientExpr parse_expr(std::string_view text, const std::vector<std::string>& allowed_vars) {
    return CoefficientExpr::parse(text, allowed_vars);
}

double eval_expr(const CoefficientExpr& expr, const Bindings& bindings) {
    std::vector<double> args;
    args.reserve(expr.variables().size());
    for (const auto& name : expr.variables()) {
        auto it = bindings.find(name);
        if (it == bindings.end()) {
            if (expr.depends_on(name)) {
                throw Error(ErrorKind::InvalidArgument, "no binding for variable '" + name + "'");
            }
            args.push_back(0.0);
        } else {
            args.push_back(it->second);
        }
    }
    return expr.evaluate(args);
}

LatticeScan scan_sampled(const CoefficientExpr& expr, std::span<const Interval> box,
                         int samples_per_axis) {
    if (samples_per_axis < 2) {
        throw Error(ErrorKind::InvalidArgument, "samples per axis must be at least 2");
    }
    const std::size_t dims = expr.variables().size();
    if (box.size() != dims) {
        throw Error(ErrorKind::InvalidArgument, "sample box must give one interval per variable");
    }

    auto coordinate = [&](std::size_t axis, int k) {
        const Interval& iv = box[axis];
        if (k == samples_per_axis - 1) return iv.hi;
        return iv.lo + (iv.hi - iv.lo) * k / (samples_per_axis - 1);
    };

    LatticeScan scan;
    std::vector<int> index(dims, 0);
    std::vector<double> point(dims);
    int first_sign = 0;
    bool first = true;
    for (;;) {
        for (std::size_t d = 0; d < dims; ++d) point[d] = coordinate(d, index[d]);
        double v = 0.0;
        try {
            v = expr.evaluate(point);
        } catch (const Error& e) {
            std::string where;
            for (std::size_t d = 0; d < dims; ++d) {
                where += (d ? ", " : "") + expr.variables()[d] + "=" + format_number(point[d]);
            }
            throw Error(e.kind(), std::string(e.what()) + " at (" + where + ") in '" +
                                      expr.source() + "'");
        }
        scan.sup_abs = std::max(scan.sup_abs, std::abs(v));
        scan.min_value = first ? v : std::min(scan.min_value, v);
        scan.max_value = first ? v : std::max(scan.max_value, v);
        first = false;
        const int sign = (v > 0.0) - (v < 0.0);
        if (sign != 0) {
            if (first_sign == 0) {
                first_sign = sign;
            } else if (sign != first_sign && !scan.sign_changes) {
                scan.sign_changes = true;
                scan.sign_change_point = point;
            }
        }

        std::size_t d = 0;
        for (; d < dims; ++d) {
            if (++index[d] < samples_per_axis) break;
            index[d] = 0;
        }
        if (d == dims) break;
    }
    return scan;
}

double sup_abs_sampled(const CoefficientExpr& expr, std::span<const Interval> box,
                       int samples_per_axis) {
    return scan_sampled(expr, box, samples_per_axis).sup_abs;
}

}  // namespace dpde
