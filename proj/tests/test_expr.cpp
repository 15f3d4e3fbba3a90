#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "dpde/expr.hpp"

using namespace dpde;

namespace {

const std::vector<std::string> kXT{"x", "t"};
const char* const kExampleA = "(1+x^2)/(1+2*x*t+2*x^2+x^4)";

double eval_text(const char* text) { return parse_expr(text, {}).evaluate({}); }

std::string random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
    std::uniform_real_distribution<double> lit(0.0, 5.0);
    switch (pick(rng)) {
        case 0: return "x";
        case 1: return "t";
        case 2: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", lit(rng));
            return buf;
        }
        case 3: return "(" + random_expr(rng, depth - 1) + "+" + random_expr(rng, depth - 1) + ")";
        case 4: return random_expr(rng, depth - 1) + "-" + random_expr(rng, depth - 1);
        case 5: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
        case 6: return random_expr(rng, depth - 1) + "/(" + random_expr(rng, depth - 1) + ")";
        case 7: return "(" + random_expr(rng, depth - 1) + ")^" + std::to_string(rng() % 4);
        case 8: return "-" + random_expr(rng, depth - 1);
        default: {
            static const char* fns[] = {"exp", "sin", "cos", "sqrt", "abs"};
            return std::string(fns[rng() % 5]) + "(" + random_expr(rng, depth - 1) + ")";
        }
    }
}

}  // namespace

TEST_CASE("parse_expr accepts the example coefficients") {
    const CoefficientExpr half = parse_expr("0.5", kXT);
    CHECK(half.is_constant());
    CHECK(half({0.3, 0.7}) == 0.5);

    const CoefficientExpr a = parse_expr(kExampleA, kXT);
    CHECK(a.depends_on("x"));
    CHECK(a.depends_on("t"));
    CHECK(eval_expr(a, {{"x", 0.0}, {"t", 0.0}}) == 1.0);

    const CoefficientExpr u0 = parse_expr("exp(-10*(4*x-1)^2)", {"x"});
    CHECK(u0({0.25}) == 1.0);

    const CoefficientExpr b = parse_expr("1/(1+x^2*t^2)", kXT);
    CHECK(b({1.0, 1.0}) == 0.5);
}

TEST_CASE("operator precedence and associativity") {
    CHECK(eval_text("2+3*4") == 14.0);
    CHECK(eval_text("2^3^2") == 512.0);
    CHECK(eval_text("-2^2") == -4.0);
    CHECK(eval_text("(-2)^2") == 4.0);
    CHECK(eval_text("8-3-2") == 3.0);
    CHECK(eval_text("8/4/2") == 1.0);
    CHECK(eval_text("2^-1") == 0.5);
    CHECK(eval_text("--3") == 3.0);
    CHECK(eval_text("1e-3*1000") == 1.0);
    CHECK(eval_text("abs(-1.5) + sqrt(16)") == 5.5);
    CHECK(eval_text("2 * sin(0) + cos(0)") == 1.0);
}

TEST_CASE("parse errors carry offsets") {
    try {
        parse_expr("1+*x", kXT);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(parse_expr("", kXT), ParseError);
    CHECK_THROWS_AS(parse_expr("(1+x", kXT), ParseError);
    CHECK_THROWS_AS(parse_expr("1 2", kXT), ParseError);
    CHECK_THROWS_AS(parse_expr("foo(x)", kXT), Error);
    CHECK_THROWS_AS(parse_expr("exp(x", kXT), ParseError);
}

TEST_CASE("variables outside the allowed set are rejected") {
    try {
        parse_expr("x + y", kXT);
        FAIL("expected UnknownVariable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownVariable);
    }
    const CoefficientExpr e = parse_expr("x*t", kXT);
    CHECK_THROWS_AS(eval_expr(e, {{"x", 1.0}}), Error);
}

TEST_CASE("evaluation domain errors") {
    auto kind_of = [](const char* text) {
        try {
            eval_text(text);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    CHECK(kind_of("1/0") == ErrorKind::EvalDomainError);
    CHECK(kind_of("sqrt(-1)") == ErrorKind::EvalDomainError);
    CHECK(kind_of("(-2)^0.5") == ErrorKind::EvalDomainError);
    CHECK(kind_of("0^-1") == ErrorKind::EvalDomainError);
    CHECK(eval_text("(-2)^3") == -8.0);
    CHECK(eval_text("(-2)^3.0") == -8.0);
}

TEST_CASE("pretty-printing round-trips on random expressions") {
    std::mt19937 rng(20241016);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::string text = random_expr(rng, 4);
        CAPTURE(text);
        const CoefficientExpr original = parse_expr(text, kXT);
        const CoefficientExpr reparsed = parse_expr(original.to_string(), kXT);
        for (int k = 0; k < 100; ++k) {
            const double x = coord(rng);
            const double t = coord(rng);
            double lhs = 0.0;
            double rhs = 0.0;
            bool lhs_threw = false;
            bool rhs_threw = false;
            try {
                lhs = original({x, t});
            } catch (const Error&) {
                lhs_threw = true;
            }
            try {
                rhs = reparsed({x, t});
            } catch (const Error&) {
                rhs_threw = true;
            }
            REQUIRE(lhs_threw == rhs_threw);
            if (!lhs_threw) {
                CHECK(std::memcmp(&lhs, &rhs, sizeof lhs) == 0);
            }
        }
    }
}

TEST_CASE("evaluation is pure") {
    const CoefficientExpr a = parse_expr(kExampleA, kXT);
    const double first = a({0.37, 0.21});
    for (int i = 0; i < 10; ++i) CHECK(a({0.37, 0.21}) == first);
}

TEST_CASE("sup_abs_sampled") {
    const Interval box_xt[] = {{0.0, 1.0}, {0.0, 2.0}};
    CHECK(sup_abs_sampled(CoefficientExpr::constant(0.5, kXT), box_xt, 5) == 0.5);
    CHECK(sup_abs_sampled(parse_expr("x*t", kXT), box_xt, 3) == 2.0);

    // A dense 1001 x 1001 scan (tests/oracles/mesh_scan.py) gives exactly 1,
    // attained on x = 0.
    const Interval box_a[] = {{0.0, 1.0}, {0.0, 0.5}};
    CHECK(sup_abs_sampled(parse_expr(kExampleA, kXT), box_a, 101) == 1.0);

    CHECK_THROWS_AS(sup_abs_sampled(parse_expr("x", kXT), box_xt, 1), Error);
    const Interval box_bad[] = {{-1.0, 1.0}, {0.0, 1.0}};
    try {
        sup_abs_sampled(parse_expr("1/x", kXT), box_bad, 3);
        FAIL("expected EvalDomainError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EvalDomainError);
    }
}

TEST_CASE("sup_abs_sampled is monotone on nested lattices") {
    const Interval box[] = {{0.0, 1.0}, {0.0, 0.5}};
    const CoefficientExpr e = parse_expr("sin(7*x)*cos(5*t) + x*t", kXT);
    double previous = 0.0;
    for (int n = 2; n <= 257; n = 2 * n - 1) {
        const double s = sup_abs_sampled(e, box, n);
        CHECK(s >= previous);
        previous = s;
    }
}

TEST_CASE("scan_sampled reports sign changes") {
    const Interval box[] = {{0.0, 1.0}, {0.0, 1.0}};
    const LatticeScan scan = scan_sampled(parse_expr("x-0.5", kXT), box, 11);
    CHECK(scan.sign_changes);
    CHECK(scan.min_value == doctest::Approx(-0.5));
    CHECK(scan.max_value == doctest::Approx(0.5));
    REQUIRE(scan.sign_change_point.size() == 2);
    CHECK(scan.sign_change_point[0] > 0.5);
}
