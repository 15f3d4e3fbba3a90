#pragma once

#include <string>

#include "dpde/problem.hpp"

namespace dpde::testing {

inline DelayProblem1D problem_1d(const std::string& a, const std::string& b, double delay,
                                 const std::string& u0, const std::string& phi = "0",
                                 double final_time = 0.5, double length = 1.0) {
    DelayProblem1D p;
    p.coeff_a = parse_expr(a, vars::coeff_1d);
    p.coeff_b = parse_expr(b, vars::coeff_1d);
    p.delay = delay;
    p.initial = parse_expr(u0, vars::initial_1d);
    p.history = parse_expr(phi, vars::history_1d);
    p.domain_length = length;
    p.final_time = final_time;
    return p;
}

inline DelayProblem2D problem_2d(const std::string& a, const std::string& b,
                                 const std::string& c, double delay_x, double delay_y,
                                 const std::string& u0, const std::string& phi = "0",
                                 double final_time = 0.5) {
    DelayProblem2D p;
    p.coeff_a = parse_expr(a, vars::coeff_2d);
    p.coeff_b = parse_expr(b, vars::coeff_2d);
    p.coeff_c = parse_expr(c, vars::coeff_2d);
    p.delay_x = delay_x;
    p.delay_y = delay_y;
    p.initial = parse_expr(u0, vars::initial_2d);
    p.history = parse_expr(phi, vars::history_2d);
    p.final_time = final_time;
    return p;
}

inline const char* const kExampleA = "(1+x^2)/(1+2*x*t+2*x^2+x^4)";
inline const char* const kGaussian = "exp(-10*(4*x-1)^2)";

}  // namespace dpde::testing
