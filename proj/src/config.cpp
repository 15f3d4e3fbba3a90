#include "dpde/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dpde {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        std::string item = trim(s.substr(start, end - start));
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
};

// Sectioned key = value document. Every key must be consumed; leftovers are
// reported as unknown so typos do not pass silently.
class Document {
public:
    Document(std::string_view text, std::string source) : source_(std::move(source)) {
        std::istringstream in{std::string(text)};
        std::string raw;
        std::string section;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto hash = raw.find_first_of("#;");
            const std::string line = trim(std::string_view(raw).substr(0, hash));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    throw ConfigError("", "", line_no, "malformed section header '" + line + "'");
                }
                section = lower(trim(std::string_view(line).substr(1, line.size() - 2)));
                if (section.empty()) throw ConfigError("", "", line_no, "empty section name");
                sections_[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(section, "", line_no, "expected 'key = value', got '" + line + "'");
            }
            if (section.empty()) {
                throw ConfigError("", "", line_no, "key outside of any [section]");
            }
            const std::string key = trim(std::string_view(line).substr(0, eq));
            const std::string value = trim(std::string_view(line).substr(eq + 1));
            if (key.empty()) throw ConfigError(section, "", line_no, "empty key");
            auto& keys = sections_[section];
            if (keys.count(key)) {
                throw ConfigError(section, key, line_no,
                                  "duplicate key (first set on line " +
                                      std::to_string(keys[key].line) + ")");
            }
            keys[key] = Entry{value, line_no};
        }
    }

    const Entry* find(const std::string& section, const std::string& key) {
        auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        used_.insert(section + "\n" + key);
        return &k->second;
    }

    const Entry& require(const std::string& section, const std::string& key) {
        const Entry* e = find(section, key);
        if (!e) throw ConfigError(section, key, 0, "required key is missing");
        return *e;
    }

    CoefficientExpr expr(const std::string& section, const std::string& key,
                         const std::vector<std::string>& vars) {
        return to_expr(section, key, require(section, key), vars);
    }

    std::optional<CoefficientExpr> optional_expr(const std::string& section,
                                                 const std::string& key,
                                                 const std::vector<std::string>& vars) {
        const Entry* e = find(section, key);
        if (!e) return std::nullopt;
        return to_expr(section, key, *e, vars);
    }

    double number(const std::string& section, const std::string& key) {
        return to_number(section, key, require(section, key));
    }

    std::optional<double> optional_number(const std::string& section, const std::string& key) {
        const Entry* e = find(section, key);
        if (!e) return std::nullopt;
        return to_number(section, key, *e);
    }

    int integer(const std::string& section, const std::string& key) {
        const Entry& e = require(section, key);
        return to_integer(section, key, e, to_number(section, key, e));
    }

    std::optional<int> optional_integer(const std::string& section, const std::string& key) {
        const Entry* e = find(section, key);
        if (!e) return std::nullopt;
        return to_integer(section, key, *e, to_number(section, key, *e));
    }

    std::vector<double> number_list(const std::string& section, const std::string& key,
                                    const Entry& e) {
        std::vector<double> out;
        for (const auto& item : split_list(e.value)) {
            try {
                out.push_back(parse_constant(item));
            } catch (const Error& err) {
                throw ConfigError(section, key, e.line, "bad list item '" + item + "': " + err.what());
            }
        }
        return out;
    }

    int line_of(const std::string& section, const std::string& key) {
        const Entry* e = find(section, key);
        return e ? e->line : 0;
    }

    void reject_unused() const {
        for (const auto& [section, keys] : sections_) {
            for (const auto& [key, entry] : keys) {
                if (!used_.count(section + "\n" + key)) {
                    throw ConfigError(section, key, entry.line, "unknown key");
                }
            }
        }
    }

    bool has_section(const std::string& section) const { return sections_.count(section) > 0; }

private:
    CoefficientExpr to_expr(const std::string& section, const std::string& key, const Entry& e,
                            const std::vector<std::string>& vars) {
        try {
            return parse_expr(e.value, vars);
        } catch (const Error& err) {
            throw ConfigError(section, key, e.line, err.what());
        }
    }

    double to_number(const std::string& section, const std::string& key, const Entry& e) {
        try {
            return parse_constant(e.value);
        } catch (const Error& err) {
            throw ConfigError(section, key, e.line, err.what());
        }
    }

    int to_integer(const std::string& section, const std::string& key, const Entry& e, double v) {
        if (v != std::trunc(v) || std::abs(v) > 1e9) {
            throw ConfigError(section, key, e.line, "expected an integer, got '" + e.value + "'");
        }
        return static_cast<int>(v);
    }

    std::string source_;
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::set<std::string> used_;
};

OutflowPolicy outflow_policy(Document& doc, const std::string& mode_key,
                             const std::string& psi_key, const std::vector<std::string>& vars) {
    std::optional<CoefficientExpr> psi = doc.optional_expr("outflow", psi_key, vars);
    const Entry* mode = doc.find("outflow", mode_key);
    std::string m = mode ? lower(mode->value) : (psi ? "dirichlet" : "extrapolate");
    if (m == "dirichlet") {
        if (!psi) {
            throw ConfigError("outflow", psi_key, mode ? mode->line : 0,
                              "dirichlet outflow needs " + psi_key);
        }
        return Dirichlet{*psi};
    }
    if (m == "extrapolate") {
        if (psi) {
            throw ConfigError("outflow", psi_key, doc.line_of("outflow", psi_key),
                              psi_key + " given but outflow mode is extrapolate");
        }
        return Extrapolate{};
    }
    throw ConfigError("outflow", mode_key, mode ? mode->line : 0,
                      "mode must be 'dirichlet' or 'extrapolate', got '" + m + "'");
}

double positive(Document& doc, const std::string& section, const std::string& key,
                bool allow_zero = false) {
    const double v = doc.number(section, key);
    if (!(allow_zero ? v >= 0.0 : v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(section, key, doc.line_of(section, key),
                          allow_zero ? "must be non-negative" : "must be positive");
    }
    return v;
}

template <class Build>
auto grid_or_config_error(Document& doc, const std::string& key, Build&& build) {
    try {
        return build();
    } catch (const Error& e) {
        throw ConfigError("discretization", key, doc.line_of("discretization", key), e.what());
    }
}

}  // namespace

double parse_constant(std::string_view text) {
    const CoefficientExpr e = parse_expr(text, {});
    const double v = e.evaluate({});
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "value is not finite");
    return v;
}

Scheme parse_scheme(std::string_view text) {
    const std::string s = lower(trim(text));
    if (s == "lax_friedrichs" || s == "lf" || s == "lax-friedrichs") return Scheme::LaxFriedrichs;
    if (s == "leap_frog" || s == "leapfrog" || s == "leap-frog") return Scheme::LeapFrog;
    throw Error(ErrorKind::InvalidArgument,
                "unknown scheme '" + std::string(text) + "' (use lf or leapfrog)");
}

ErrorNorm parse_norm(std::string_view text) {
    const std::string s = lower(trim(text));
    if (s == "max" || s == "max_abs") return ErrorNorm::MaxAbs;
    if (s == "l2") return ErrorNorm::L2;
    throw Error(ErrorKind::InvalidArgument,
                "unknown norm '" + std::string(text) + "' (use max or l2)");
}

RunConfig parse_config(std::string_view text, std::string source_name) {
    Document doc(text, source_name);
    RunConfig cfg;
    cfg.source = source_name;
    cfg.name = std::filesystem::path(source_name).stem().string();
    if (const Entry* e = doc.find("problem", "name")) cfg.name = e->value;
    cfg.dimension = doc.optional_integer("problem", "dimension").value_or(1);
    if (cfg.dimension != 1 && cfg.dimension != 2) {
        throw ConfigError("problem", "dimension", doc.line_of("problem", "dimension"),
                          "dimension must be 1 or 2");
    }

    const double t_final = positive(doc, "domain", "t_final", true);

    if (cfg.dimension == 1) {
        DelayProblem1D& p = cfg.problem_1d;
        p.coeff_a = doc.expr("equation", "a", vars::coeff_1d);
        p.coeff_b = doc.expr("equation", "b", vars::coeff_1d);
        p.delay = positive(doc, "equation", "alpha");
        p.domain_length = positive(doc, "domain", "X");
        p.final_time = t_final;
        p.initial = doc.expr("initial", "u0", vars::initial_1d);
        p.history = doc.optional_expr("history", "phi", vars::history_1d)
                        .value_or(CoefficientExpr::constant(0.0, vars::history_1d));
        p.outflow = outflow_policy(doc, "mode", "psi", vars::outflow_1d);
        cfg.cells_x = doc.integer("discretization", "cells");
        cfg.grid_1d = grid_or_config_error(doc, "cells", [&] {
            return build_grid_1d(p.domain_length, p.delay, cfg.cells_x);
        });
    } else {
        DelayProblem2D& p = cfg.problem_2d;
        p.coeff_a = doc.expr("equation", "a", vars::coeff_2d);
        p.coeff_b = doc.expr("equation", "b", vars::coeff_2d);
        p.coeff_c = doc.expr("equation", "c", vars::coeff_2d);
        p.delay_x = positive(doc, "equation", "alpha");
        p.delay_y = positive(doc, "equation", "beta");
        p.domain_length_x = positive(doc, "domain", "X");
        p.domain_length_y = positive(doc, "domain", "Y");
        p.final_time = t_final;
        p.initial = doc.expr("initial", "u0", vars::initial_2d);
        p.history = doc.optional_expr("history", "phi", vars::history_2d)
                        .value_or(CoefficientExpr::constant(0.0, vars::history_2d));
        p.outflow_east = outflow_policy(doc, "mode_x", "psi_x", vars::outflow_2d);
        p.outflow_north = outflow_policy(doc, "mode_y", "psi_y", vars::outflow_2d);
        const std::optional<int> both = doc.optional_integer("discretization", "cells");
        cfg.cells_x = doc.optional_integer("discretization", "cells_x").value_or(both.value_or(0));
        cfg.cells_y = doc.optional_integer("discretization", "cells_y").value_or(both.value_or(0));
        if (cfg.cells_x == 0 || cfg.cells_y == 0) {
            throw ConfigError("discretization", "cells", 0,
                              "2D runs need 'cells' or both 'cells_x' and 'cells_y'");
        }
        cfg.grid_2d = grid_or_config_error(doc, "cells", [&] {
            return build_grid_2d(p.domain_length_x, p.domain_length_y, p.delay_x, p.delay_y,
                                 cfg.cells_x, cfg.cells_y);
        });
    }

    cfg.dt = doc.optional_number("discretization", "dt");
    cfg.cfl_safety = doc.optional_number("discretization", "cfl_safety");
    if (cfg.dt.has_value() == cfg.cfl_safety.has_value()) {
        throw ConfigError("discretization", cfg.dt ? "cfl_safety" : "dt",
                          doc.line_of("discretization", "cfl_safety"),
                          "give exactly one of dt and cfl_safety");
    }
    if (cfg.dt && !(*cfg.dt > 0.0)) {
        throw ConfigError("discretization", "dt", doc.line_of("discretization", "dt"),
                          "must be positive");
    }
    if (cfg.cfl_safety && !(*cfg.cfl_safety > 0.0 && *cfg.cfl_safety <= 1.0)) {
        throw ConfigError("discretization", "cfl_safety",
                          doc.line_of("discretization", "cfl_safety"), "must lie in (0, 1]");
    }
    if (const Entry* e = doc.find("discretization", "scheme")) {
        try {
            cfg.scheme = parse_scheme(e->value);
        } catch (const Error& err) {
            throw ConfigError("discretization", "scheme", e->line, err.what());
        }
    }
    if (auto threads = doc.optional_integer("discretization", "threads")) {
        if (*threads < 1) {
            throw ConfigError("discretization", "threads",
                              doc.line_of("discretization", "threads"), "must be >= 1");
        }
        cfg.threads = *threads;
    }

    if (const Entry* e = doc.find("output", "snapshot_times")) {
        cfg.snapshot_times = doc.number_list("output", "snapshot_times", *e);
        for (double t : cfg.snapshot_times) {
            if (t < 0.0 || t > t_final * (1.0 + 1e-12)) {
                throw ConfigError("output", "snapshot_times", e->line,
                                  "snapshot time outside [0, t_final]");
            }
        }
    }
    if (const Entry* e = doc.find("output", "directory")) cfg.output_dir = e->value;
    if (const Entry* e = doc.find("output", "norm")) {
        try {
            cfg.norm = parse_norm(e->value);
        } catch (const Error& err) {
            throw ConfigError("output", "norm", e->line, err.what());
        }
    }

    if (const Entry* e = doc.find("convergence", "dx_list")) {
        cfg.dx_list = doc.number_list("convergence", "dx_list", *e);
        for (double dx : cfg.dx_list) {
            if (!(dx > 0.0)) throw ConfigError("convergence", "dx_list", e->line, "dx must be > 0");
        }
    }
    if (const Entry* e = doc.find("convergence", "dt_divisors")) {
        cfg.dt_divisors.clear();
        for (double d : doc.number_list("convergence", "dt_divisors", *e)) {
            if (d < 1.0 || d != std::trunc(d)) {
                throw ConfigError("convergence", "dt_divisors", e->line,
                                  "divisors must be positive integers");
            }
            cfg.dt_divisors.push_back(static_cast<int>(d));
        }
    }

    doc.reject_unused();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "", 0, "cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.string());
}

}  // namespace dpde
