// Acceptance gate: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dpde/analysis.hpp"
#include "dpde/commands.hpp"
#include "dpde/config.hpp"
#include "dpde/format.hpp"
#include "dpde/solver.hpp"
#include "../support.hpp"
#include "../upwind_oracle.hpp"

using namespace dpde;
using namespace dpde::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = check();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (!out.pass) ++failures;
    std::printf("%s  %2d  %s: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", id, title,
                out.detail.c_str(), elapsed.count());
    std::fflush(stdout);
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double gaussian(double x) { return std::exp(-10.0 * (4.0 * x - 1.0) * (4.0 * x - 1.0)); }

const char* const kExample2B = "1/(1+x^2*t^2)";

Outcome exact_transport() {
    const DelayProblem1D p = problem_1d("1", "0", 0.25, "exp(-400*(x-0.25)^2)", "0", 2.5);
    const Grid1D g = build_grid_1d(1.0, 0.25, 200);
    const Field1D u0 = sample_initial(p, g);
    TimeMarcher1D m(p, g, g.cell_width(), Scheme::LaxFriedrichs);
    double worst = 0.0;
    for (int n = 1; n <= 500; ++n) {
        m.advance();
        // Interior and inflow nodes carry the shifted data; node J is the
        // extrapolated outflow value.
        for (int j = 0; j < g.num_cells(); ++j) {
            const double exact = j >= n ? u0.values[j - n] : 0.0;
            worst = std::max(worst, std::abs(m.current().values[j] - exact));
        }
    }
    return {worst <= 1e-12 && m.step_index() == 500, "max deviation " + sci(worst) + " over 500 steps"};
}

Outcome hand_stencils() {
    double worst = 0.0;
    auto diff = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };

    const DelayProblem1D p1 = problem_1d("1", "1", 0.25, "0");
    const Grid1D g1 = build_grid_1d(1.0, 0.25, 4);
    const Field1D u{{0, 0, 1, 0, 0}, 0.0};
    const Field1D lf = lax_friedrichs_step_1d(u, p1, g1, 0.25);
    diff(lf.values[1], 0.0);
    diff(lf.values[2], 0.0);
    diff(lf.values[3], 1.25);
    const Field1D lp = leap_frog_step_1d(u, Field1D{{0, 0, 1, 0, 0}, 0.2}, p1, g1, 0.2);
    diff(lp.values[1], -0.8);
    diff(lp.values[2], 1.0);
    diff(lp.values[3], 1.2);

    const DelayProblem2D p2 = problem_2d("1", "1", "1", 0.25, 0.25, "0");
    const Grid2D g2 = build_grid_2d(1.0, 1.0, 0.25, 0.25, 4, 4);
    Field2D s(5, 5, 0.0);
    s(2, 2) = 1.0;
    s(1, 1) = 0.5;
    const Field2D l2 = lax_friedrichs_step_2d(s, p2, g2, 1.0 / 16);
    const double want[3][3] = {{0, 0.3125, 0}, {0.3125, 0.03125, 0.375}, {0, 0.375, 0.0625}};
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) diff(l2(i, j), want[i - 1][j - 1]);
    }
    return {worst <= 1e-15, "max deviation " + sci(worst) + " over 15 stencil values"};
}

Outcome stability_bound() {
    DelayProblem1D p = problem_1d(kExampleA, "0.5", 0.02, kGaussian, "0", 0.5);
    p.outflow = Dirichlet{parse_expr("0", vars::outflow_1d)};
    const Grid1D g = build_grid_1d(1.0, 0.02, 1000);
    const double dt = 0.001;
    TimeMarcher1D m(p, g, dt, Scheme::LaxFriedrichs);
    int violations = 0;
    double worst_ratio = 0.0;
    for (int n = 0; n < 500; ++n) {
        const double before = max_norm(m.current().values);
        double max_b = 0.0;
        for (int j = 0; j <= g.num_cells(); ++j) {
            max_b = std::max(max_b, std::abs(p.coeff_b({g.node_position(j), n * dt})));
        }
        m.advance();
        const double after = max_norm(m.current().values);
        const double bound = (1.0 + dt * max_b) * before;
        if (after > bound) ++violations;
        worst_ratio = std::max(worst_ratio, after / bound);
    }
    return {violations == 0 && m.step_index() == 500,
            std::to_string(violations) + " violations in 500 steps, max |U^{n+1}|/bound " +
                format_sig6(worst_ratio)};
}

std::string table_text(const ErrorTable& t) {
    std::string s;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        s += r ? " | " : "";
        for (std::size_t c = 0; c < t.columns(); ++c) s += (c ? " " : "") + format_sig6(t.entries[r][c]);
    }
    return s;
}

Outcome table1() {
    const RunConfig c = load_config(DPDE_CONFIG_DIR "/table1.cfg");
    const ErrorTable t = convergence_table(c.problem_1d, Scheme::LaxFriedrichs, c.dx_list,
                                           c.dt_divisors, ErrorNorm::MaxAbs, 1, c.name);
    bool decreasing = true;
    bool ratios = true;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t k = 0; k + 1 < t.columns(); ++k) {
            const double ratio = t.entries[r][k] / t.entries[r][k + 1];
            decreasing = decreasing && ratio > 1.0;
            ratios = ratios && ratio >= 1.6 && ratio <= 2.8;
        }
    }
    const double first = t.entries[0][0];
    const bool near = std::abs(first - 0.053623) <= 0.5 * 0.053623;
    return {decreasing && ratios && near,
            std::string("rows decreasing: ") + (decreasing ? "yes" : "no") +
                ", ratios in [1.6, 2.8]: " + (ratios ? "yes" : "no") + ", (dx/2, 1/100) = " +
                format_sig6(first) + " vs 0.053623" + (near ? "" : " (outside 50%)") +
                "; table " + table_text(t)};
}

Outcome table4() {
    const RunConfig c = load_config(DPDE_CONFIG_DIR "/table4.cfg");
    const ErrorTable t = convergence_table(c.problem_1d, Scheme::LeapFrog, c.dx_list,
                                           c.dt_divisors, ErrorNorm::L2, 1, c.name);
    double min_ratio = INFINITY;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t k = 0; k + 1 < t.columns(); ++k) {
            min_ratio = std::min(min_ratio, t.entries[r][k] / t.entries[r][k + 1]);
        }
    }
    return {min_ratio >= 1.8, "smallest adjacent-column ratio " + format_sig6(min_ratio) +
                                  "; table " + table_text(t)};
}

Outcome oracle_convergence() {
    const DelayProblem1D p = problem_1d("1", "0.5", 0.25, kGaussian, "0", 0.5);
    std::string detail;
    bool pass = true;
    for (Scheme s : {Scheme::LaxFriedrichs, Scheme::LeapFrog}) {
        std::vector<double> errors;
        for (int cells : {100, 200, 400}) {
            const Grid1D g = build_grid_1d(1.0, 0.25, cells);
            SolveOptions o;
            o.scheme = s;
            const SolutionHistory1D h = solve_1d(p, g, 0.95 * g.cell_width(), o);
            const auto ref = upwind_reference(gaussian, 0.5, 0.25, 1.0, cells, 8, 0.5);
            double worst = 0.0;
            for (int j = 0; j <= cells; ++j) {
                worst = std::max(worst, std::abs(h.final_field().values[j] - ref[j]));
            }
            errors.push_back(worst);
        }
        const double r1 = errors[0] / errors[1];
        const double r2 = errors[1] / errors[2];
        pass = pass && r1 >= 1.8 && r2 >= 1.8;
        detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(s)) + " errors " +
                  format_sig6(errors[0]) + " " + format_sig6(errors[1]) + " " +
                  format_sig6(errors[2]) + " ratios " + format_sig6(r1) + " " + format_sig6(r2);
    }
    return {pass, detail};
}

Outcome reversibility() {
    const DelayProblem1D p = problem_1d("(1+x^2)/(2+x^4)", "0", 0.25, kGaussian);
    const Grid1D g = build_grid_1d(1.0, 0.25, 200);
    const double dt = 0.8 * g.cell_width();
    auto [u0, u1] = bootstrap_leap_frog(sample_initial(p, g), p, g, dt);
    const Field1D start0 = u0;
    const Field1D start1 = u1;
    Field1D prev = std::move(u0);
    Field1D curr = std::move(u1);
    for (int n = 0; n < 100; ++n) {
        Field1D next = leap_frog_step_1d(prev, curr, p, g, dt);
        prev = std::move(curr);
        curr = std::move(next);
    }
    for (int n = 0; n < 100; ++n) {
        Field1D back = leap_frog_step_1d(curr, prev, p, g, -dt);
        curr = std::move(prev);
        prev = std::move(back);
    }
    // After the walk back, curr holds U^1 and prev holds U^0.
    double worst = 0.0;
    for (int j = 1; j < g.num_cells(); ++j) {
        worst = std::max(worst, std::abs(curr.values[j] - start1.values[j]));
        worst = std::max(worst, std::abs(prev.values[j] - start0.values[j]));
    }
    return {worst <= 1e-10, "max interior deviation " + sci(worst) + " after 100 + 100 steps"};
}

Outcome strict_cfl() {
    const DelayProblem1D p = problem_1d(kExampleA, "0.5", 0.02, kGaussian, "0", 0.5);
    const Grid1D g = build_grid_1d(1.0, 0.02, 1000);
    std::string detail;
    bool rejected = false;
    const CflReport at_one = cfl_report_1d(p, g, 0.001, Scheme::LeapFrog);
    try {
        SolveOptions o;
        o.scheme = Scheme::LeapFrog;
        solve_1d(p, g, 0.001, o);
    } catch (const NumericalAbort&) {
        rejected = false;
    } catch (const Error& e) {
        rejected = e.kind() == ErrorKind::StrictCflViolation;
    }
    detail = "Leap-Frog at Courant " + format_sig6(at_one.courant_number) +
             (rejected ? " rejected" : " NOT rejected");

    const double dt = 0.0012;
    const CflReport lf = cfl_report_1d(p, g, dt, Scheme::LaxFriedrichs);
    TimeMarcher1D m(p, g, dt, Scheme::LaxFriedrichs);
    bool unstable = false;
    long trip = -1;
    try {
        while ((m.step_index() + 1) * dt <= 0.5 + 1e-12) m.advance();
    } catch (const Error& e) {
        unstable = e.kind() == ErrorKind::Unstable;
        trip = m.step_index() + 1;
    }
    detail += "; Lax-Friedrichs at Courant " + format_sig6(lf.courant_number) +
              (unstable ? " tripped Unstable at step " + std::to_string(trip) + " (t=" +
                              format_sig6(trip * dt) + ")"
                        : " did not trip the guard");
    return {rejected && unstable && std::abs(lf.courant_number - 1.2) < 1e-12, detail};
}

Outcome symmetry_2d() {
    const DelayProblem2D p = problem_2d("(1+x^2+y^2)/(1+2*(x+y)*t+2*(x^2+y^2)+x^4)",
                                        "(1+y^2+x^2)/(1+2*(y+x)*t+2*(y^2+x^2)+y^4)", "0.1", 0.5,
                                        0.5, "exp(-10*(4*x+4*y-1)^2)", "0", 0.1);
    const Grid2D g = build_grid_2d(1.0, 1.0, 0.5, 0.5, 100, 100);
    TimeMarcher2D m(p, g, 0.001, Scheme::LaxFriedrichs);
    double worst = 0.0;
    while (m.step_index() < 100) {
        m.advance();
        const Field2D& f = m.current();
        for (int i = 0; i < f.nx; ++i) {
            for (int j = i + 1; j < f.ny; ++j) worst = std::max(worst, std::abs(f(i, j) - f(j, i)));
        }
    }
    return {worst <= 1e-12, "max |U(i,j) - U(j,i)| = " + sci(worst) + " over 100 steps to t=0.1"};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const RunConfig c = load_config(DPDE_CONFIG_DIR "/example2.cfg");
    const fs::path base = fs::temp_directory_path() / "dpde_acceptance_determinism";
    fs::remove_all(base);
    std::ostringstream diag;
    CommandOverrides o;
    o.output_dir = base / "first";
    if (cmd_solve(c, o, diag) != ExitStatus::Ok) return {false, "first run failed: " + diag.str()};
    o.output_dir = base / "second";
    if (cmd_solve(c, o, diag) != ExitStatus::Ok) return {false, "second run failed: " + diag.str()};
    int files = 0;
    bool same = true;
    for (const auto& entry : fs::directory_iterator(base / "first")) {
        if (entry.path().extension() != ".csv") continue;
        ++files;
        same = same && slurp(entry.path()) == slurp(base / "second" / entry.path().filename());
    }
    return {same && files > 0, std::to_string(files) + " CSV file(s) " +
                                   (same ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
    report(1, "exact transport", exact_transport);
    report(2, "hand-stencil fixtures", hand_stencils);
    report(3, "max-norm stability bound", stability_bound);
    report(4, "table1 reproduction", table1);
    report(5, "table4 trend", table4);
    report(6, "oracle convergence", oracle_convergence);
    report(7, "Leap-Frog reversibility", reversibility);
    report(8, "strict-CFL enforcement", strict_cfl);
    report(9, "2D symmetry", symmetry_2d);
    report(10, "determinism", determinism);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
