#include "dpde/problem.hpp"

#include <cmath>
#include <cstdio>

namespace dpde {

namespace {

int sign_of(const LatticeScan& scan) {
    if (scan.max_value > 0.0) return 1;
    if (scan.min_value < 0.0) return -1;
    return 0;
}

std::string point_text(const std::vector<std::string>& names, const std::vector<double>& point) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < point.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%s=%.6g", i ? ", " : "", names[i].c_str(), point[i]);
        out += buf;
    }
    return out;
}

void check_sign(const CoefficientExpr& coeff, const LatticeScan& scan, const char* name,
                ValidationReport& report) {
    if (scan.sign_changes) {
        report.verdict = Verdict::Fatal;
        report.messages.push_back(std::string("coefficient ") + name +
                                  " changes sign; sign change detected near (" +
                                  point_text(coeff.variables(), scan.sign_change_point) + ")");
    }
}

void check_corner(double residual, double tolerance, ValidationReport& report) {
    report.corner_residual = residual;
    if (residual > tolerance) {
        if (report.verdict == Verdict::Ok) report.verdict = Verdict::Warnings;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "initial and history data disagree at the inflow corner by %.3g "
                      "(tolerance %.3g)",
                      residual, tolerance);
        report.messages.emplace_back(buf);
    }
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Ok: return "ok";
        case Verdict::Warnings: return "warnings";
        case Verdict::Fatal: return "fatal";
    }
    return "unknown";
}

ValidationReport validate(const DelayProblem1D& problem, const Grid1D& grid, double t_final,
                          int samples, double compat_tolerance) {
    if (std::abs(grid.delay() - problem.delay) > 1e-12 * problem.delay ||
        std::abs(grid.domain_length() - problem.domain_length) > 1e-12 * problem.domain_length) {
        throw Error(ErrorKind::InvalidArgument, "grid was not built for this problem");
    }
    if (!(t_final >= 0.0)) throw Error(ErrorKind::InvalidArgument, "final time must be >= 0");

    const Interval box[] = {{0.0, grid.domain_length()}, {0.0, t_final}};
    const LatticeScan scan_a = scan_sampled(problem.coeff_a, box, samples);
    const LatticeScan scan_b = scan_sampled(problem.coeff_b, box, samples);

    ValidationReport report;
    report.bound_a = scan_a.sup_abs;
    report.bound_b = scan_b.sup_abs;
    report.sign_a = sign_of(scan_a);
    check_sign(problem.coeff_a, scan_a, "a", report);
    if (report.sign_a < 0 && std::holds_alternative<Extrapolate>(problem.outflow)) {
        if (report.verdict == Verdict::Ok) report.verdict = Verdict::Warnings;
        report.messages.emplace_back(
            "a < 0 makes x = X the inflow boundary but no psi is given; extrapolating");
    }
    const double residual =
        std::abs(problem.history({0.0, 0.0}) - problem.initial({0.0}));
    check_corner(residual, compat_tolerance, report);
    return report;
}

ValidationReport validate(const DelayProblem2D& problem, const Grid2D& grid, double t_final,
                          int samples, double compat_tolerance) {
    if (std::abs(grid.x.delay() - problem.delay_x) > 1e-12 * problem.delay_x ||
        std::abs(grid.y.delay() - problem.delay_y) > 1e-12 * problem.delay_y) {
        throw Error(ErrorKind::InvalidArgument, "grid was not built for this problem");
    }
    if (!(t_final >= 0.0)) throw Error(ErrorKind::InvalidArgument, "final time must be >= 0");

    const Interval box[] = {
        {0.0, grid.x.domain_length()}, {0.0, grid.y.domain_length()}, {0.0, t_final}};
    const LatticeScan scan_a = scan_sampled(problem.coeff_a, box, samples);
    const LatticeScan scan_b = scan_sampled(problem.coeff_b, box, samples);
    const LatticeScan scan_c = scan_sampled(problem.coeff_c, box, samples);

    ValidationReport report;
    report.bound_a = scan_a.sup_abs;
    report.bound_b = scan_b.sup_abs;
    report.bound_c = scan_c.sup_abs;
    report.sign_a = sign_of(scan_a);
    report.sign_b = sign_of(scan_b);
    check_sign(problem.coeff_a, scan_a, "a", report);
    check_sign(problem.coeff_b, scan_b, "b", report);
    const double residual =
        std::abs(problem.history({0.0, 0.0, 0.0}) - problem.initial({0.0, 0.0}));
    check_corner(residual, compat_tolerance, report);
    return report;
}

double boundary_inflow_value(const DelayProblem1D& problem, double t) {
    if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "time must be >= 0");
    return problem.history({0.0, t});
}

}  // namespace dpde
