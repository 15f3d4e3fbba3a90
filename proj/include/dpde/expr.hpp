#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpde/error.hpp"

namespace dpde {

namespace detail {
struct Node;
struct Instruction;
}  // namespace detail

/// A parsed arithmetic expression over a fixed, ordered variable list.
///
/// Grammar: literals, variables, + - * / ^, unary minus and the functions
/// exp, sin, cos, sqrt, abs. '^' is right-associative and binds tighter than
/// unary minus, so "-2^2" is -4. Evaluation is pure and reentrant; the
/// expression is immutable once parsed.
class CoefficientExpr {
public:
    CoefficientExpr();  // the constant 0

    static CoefficientExpr parse(std::string_view text, std::vector<std::string> variables);
    static CoefficientExpr constant(double value, std::vector<std::string> variables = {});

    /// Arguments are positional, in variables() order.
    double evaluate(std::span<const double> args) const;
    double operator()(std::initializer_list<double> args) const {
        return evaluate(std::span<const double>(args.begin(), args.size()));
    }

    const std::vector<std::string>& variables() const noexcept { return variables_; }
    bool depends_on(std::string_view variable) const;
    bool is_constant() const noexcept { return used_mask_ == 0; }

    /// Fully parenthesized form; re-parsing it yields an identical evaluator.
    std::string to_string() const;
    const std::string& source() const noexcept { return source_; }

private:
    std::vector<std::string> variables_;
    std::string source_;
    std::shared_ptr<const detail::Node> root_;
    std::shared_ptr<const std::vector<detail::Instruction>> program_;
    unsigned long long used_mask_ = 0;
    int max_depth_ = 1;

    void compile();
};

using Bindings = std::map<std::string, double, std::less<>>;

CoefficientExpr parse_expr(std::string_view text, const std::vector<std::string>& allowed_vars);

/// Throws InvalidArgument if a variable of the expression is not bound.
double eval_expr(const CoefficientExpr& expr, const Bindings& bindings);

struct Interval {
    double lo;
    double hi;
};

/// Summary of |f| and sign over a tensor-product sample lattice.
struct LatticeScan {
    double sup_abs = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    bool sign_changes = false;
    std::vector<double> sign_change_point;  // first sample whose sign opposes the first nonzero
};

/// Samples `expr` on samples_per_axis points per variable (endpoints
/// included); box[i] ranges over variables()[i].
LatticeScan scan_sampled(const CoefficientExpr& expr, std::span<const Interval> box,
                         int samples_per_axis);

/// max |expr| over the sample lattice. A lower estimate of the true supremum.
double sup_abs_sampled(const CoefficientExpr& expr, std::span<const Interval> box,
                       int samples_per_axis);

}  // namespace dpde
