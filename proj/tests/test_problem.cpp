#include <doctest.h>

#include <cmath>

#include "dpde/mesh.hpp"
#include "dpde/problem.hpp"
#include "support.hpp"

using namespace dpde;
using namespace dpde::testing;

TEST_CASE("example 1 validates with a small corner warning") {
    const DelayProblem1D p = problem_1d(kExampleA, "0.5", 0.02, kGaussian);
    const Grid1D g = build_grid_1d(1.0, 0.02, 1000);
    const ValidationReport r = validate(p, g, 0.5);
    CHECK(r.ok());
    CHECK(r.bound_b == 0.5);
    CHECK(r.bound_a == 1.0);
    CHECK(r.sign_a == 1);
    // u0(0) = exp(-10) sits below the default compatibility tolerance.
    CHECK(r.corner_residual == doctest::Approx(std::exp(-10.0)));
    CHECK(r.verdict == Verdict::Ok);
}

TEST_CASE("constant transport with zero data") {
    const DelayProblem1D p = problem_1d("1", "0", 0.25, "0");
    const ValidationReport r = validate(p, build_grid_1d(1.0, 0.25, 100), 0.5);
    CHECK(r.verdict == Verdict::Ok);
    CHECK(r.bound_a == 1.0);
    CHECK(r.bound_b == 0.0);
    CHECK(r.messages.empty());
}

TEST_CASE("a sign change is fatal") {
    const DelayProblem1D p = problem_1d("x-0.5", "0", 0.25, "0");
    const ValidationReport r = validate(p, build_grid_1d(1.0, 0.25, 100), 0.5);
    CHECK(r.verdict == Verdict::Fatal);
    CHECK_FALSE(r.ok());
    REQUIRE(r.messages.size() == 1);
    CHECK(r.messages[0].find("sign change detected near (x=0.5") != std::string::npos);
}

TEST_CASE("vanishing a is allowed") {
    const DelayProblem1D p = problem_1d("0", "1", 0.25, "0");
    const ValidationReport r = validate(p, build_grid_1d(1.0, 0.25, 100), 0.5);
    CHECK(r.ok());
    CHECK(r.sign_a == 0);
}

TEST_CASE("warnings for corner mismatch and negative speed without psi") {
    const DelayProblem1D p = problem_1d("-1", "0", 0.25, "1", "0");
    const ValidationReport r = validate(p, build_grid_1d(1.0, 0.25, 100), 0.5);
    CHECK(r.verdict == Verdict::Warnings);
    CHECK(r.sign_a == -1);
    CHECK(r.messages.size() == 2);
    CHECK(r.corner_residual == 1.0);
}

TEST_CASE("validate rejects a grid built for another delay") {
    const DelayProblem1D p = problem_1d("1", "0", 0.25, "0");
    CHECK_THROWS_AS(validate(p, build_grid_1d(1.0, 0.5, 100), 0.5), Error);
}

TEST_CASE("validate is deterministic") {
    const DelayProblem1D p = problem_1d(kExampleA, "1/(1+x^2*t^2)", 0.05, kGaussian);
    const Grid1D g = build_grid_1d(1.0, 0.05, 100);
    const ValidationReport r1 = validate(p, g, 0.5);
    const ValidationReport r2 = validate(p, g, 0.5);
    CHECK(r1.bound_a == r2.bound_a);
    CHECK(r1.bound_b == r2.bound_b);
    CHECK(r1.messages == r2.messages);
}

TEST_CASE("2D validation checks both velocities") {
    const DelayProblem2D ok = problem_2d("1", "2", "0.1", 0.5, 0.5, "0");
    const ValidationReport r = validate(ok, build_grid_2d(1, 1, 0.5, 0.5, 10, 10), 0.5);
    CHECK(r.verdict == Verdict::Ok);
    CHECK(r.bound_b == 2.0);
    CHECK(r.bound_c == doctest::Approx(0.1));

    const DelayProblem2D bad = problem_2d("1", "y-0.5", "0", 0.5, 0.5, "0");
    CHECK(validate(bad, build_grid_2d(1, 1, 0.5, 0.5, 10, 10), 0.5).verdict == Verdict::Fatal);
}

TEST_CASE("boundary_inflow_value reads phi at s = 0") {
    CHECK(boundary_inflow_value(problem_1d("1", "0", 0.25, "0"), 0.7) == 0.0);
    CHECK(boundary_inflow_value(problem_1d("1", "0", 0.25, "0", "s + t"), 1.0) == 1.0);
    try {
        boundary_inflow_value(problem_1d("1", "0", 0.25, "0", "1/(s)"), 0.3);
        FAIL("expected EvalDomainError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EvalDomainError);
    }
}
