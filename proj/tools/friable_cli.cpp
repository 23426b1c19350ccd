// friable: exact and asymptotic counts of y-friable integers below x.
//
// Subcommands wrap the library one-to-one; every run echoes its parsed
// configuration, violations are enumerated in the report body, and the exit
// status is 0 only when nothing was violated and nothing failed.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <friable/report.hpp>
#include <friable/zeros.hpp>

using namespace friable;
using nlohmann::json;

namespace {

using Fields = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) { return detail::csv_num(v); }

// flat payloads render the same three ways everywhere
void emit_flat(const RunConfig& cfg, const std::string& payload_key, const Fields& fields,
               const std::vector<std::string>& violations) {
    if (cfg.format == "json") {
        json doc = make_document(cfg);
        json body = json::object();
        for (const auto& [k, v] : fields) {
            char* end = nullptr;
            const double d = std::strtod(v.c_str(), &end);
            if (end && *end == '\0' && !v.empty())
                body[k] = d;
            else
                body[k] = v;
        }
        doc[payload_key] = body;
        doc["violations"] = violations;
        std::cout << doc.dump(2) << '\n';
        return;
    }
    if (cfg.format == "csv") {
        std::string header, row;
        for (const auto& [k, v] : fields) {
            if (!header.empty()) {
                header += ',';
                row += ',';
            }
            header += k;
            row += detail::csv_quote(v);
        }
        std::cout << header << "\r\n" << row << "\r\n";
        for (const auto& v : violations) std::cerr << "violation: " << v << '\n';
        return;
    }
    for (const auto& [k, v] : fields) std::cout << k << " = " << v << '\n';
    for (const auto& v : violations) std::cout << "violation: " << v << '\n';
}

PrimeTable make_table(double y, const Tolerances& tol) {
    const double limit = std::max(1e5, std::ceil(y));
    return build_prime_table(std::uint64_t(limit), tol);
}

ZeroTable open_zeros(const std::string& path) {
    if (path.empty()) return bundled_zeros();
    std::ifstream in(path);
    if (!in.good()) throw format_error("cannot open zeros file: " + path);
    return load_zeros(in);
}

int finish(const RunConfig& cfg, const std::string& key, const Fields& fields,
           const std::vector<std::string>& violations) {
    emit_flat(cfg, key, fields, violations);
    return violations.empty() ? 0 : 1;
}

int cmd_count(const RunConfig& cfg, const Tolerances& tol) {
    const auto table = make_table(cfg.y, tol);
    std::vector<std::string> violations;
    Fields fields;
    fields.emplace_back("x", fmt(cfg.x));
    fields.emplace_back("y", fmt(cfg.y));
    try {
        const std::uint64_t psi = psi_smooth_exact(cfg.x, cfg.y, table, tol);
        fields.emplace_back("psi_exact", std::to_string(psi));
        if (cfg.x <= 1e7) {  // cross-check against the independent sieve
            const std::uint64_t sieved = psi_smooth_sieve(cfg.x, cfg.y, tol);
            fields.emplace_back("psi_sieve", std::to_string(sieved));
            fields.emplace_back("oracles_agree", psi == sieved ? "true" : "false");
            if (psi != sieved)
                violations.push_back("enumeration and sieve disagree: " +
                                     std::to_string(psi) + " vs " + std::to_string(sieved));
        }
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        const double estimate = psi_smooth_estimate(cfg.x, cfg.y);
        std::cerr << "estimated Psi(x,y) ~ " << estimate;
        const double u = std::log(cfg.x) / std::log(cfg.y);
        if (u <= shared_dickman().max_u())
            std::cerr << "  (x rho(u) = " << cfg.x * shared_dickman().rho(u) << ")";
        std::cerr << '\n';
        return 3;
    }
    return finish(cfg, "count", fields, violations);
}

int cmd_rho(const RunConfig& cfg, double u_arg) {
    const double u = u_arg > 0.0 ? u_arg : std::log(cfg.x) / std::log(cfg.y);
    const double r = shared_dickman().rho(u);
    Fields fields;
    fields.emplace_back("u", fmt(u));
    fields.emplace_back("rho", fmt(r));
    fields.emplace_back("log_rho", fmt(r > 0.0 ? std::log(r) : -HUGE_VAL));
    if (u >= 1.0) {
        const auto xv = xi(u);
        fields.emplace_back("xi", fmt(xv.xi));
        fields.emplace_back("xi_residual", fmt(xv.residual));
    }
    return finish(cfg, "rho", fields, {});
}

int cmd_xi(const RunConfig& cfg, double u_arg) {
    const auto xv = xi(u_arg);
    Fields fields;
    fields.emplace_back("u", fmt(xv.u));
    fields.emplace_back("xi", fmt(xv.xi));
    fields.emplace_back("residual", fmt(xv.residual));
    fields.emplace_back("I_of_xi", fmt(big_I(xv.xi)));
    fields.emplace_back("xi_deriv", fmt(xi_deriv(u_arg)));
    return finish(cfg, "xi", fields, {});
}

int cmd_saddle(const RunConfig& cfg, const Tolerances& tol) {
    const auto table = make_table(cfg.y, tol);
    const auto c = build_context(cfg.x, cfg.y, table, tol);
    Fields fields;
    fields.emplace_back("x", fmt(c.x));
    fields.emplace_back("y", fmt(c.y));
    fields.emplace_back("u", fmt(c.u));
    fields.emplace_back("xi_u", fmt(c.xi_u));
    fields.emplace_back("sigma", fmt(c.sigma));
    fields.emplace_back("alpha", fmt(c.alpha));
    fields.emplace_back("g_at_alpha", fmt(c.g_derivs[0]));
    fields.emplace_back("g2_at_alpha", fmt(c.g_derivs[2]));
    fields.emplace_back("f_at_sigma", fmt(c.f_derivs[0]));
    fields.emplace_back("f2_at_sigma", fmt(c.f_derivs[2]));
    fields.emplace_back("B", fmt(c.B));
    fields.emplace_back("H", fmt(c.H));
    fields.emplace_back("C_sigma", fmt(c.C_sigma));
    fields.emplace_back("near_boundary", c.near_boundary ? "true" : "false");
    return finish(cfg, "saddle", fields, {});
}

void check_report(const ApproximationReport& r, std::vector<std::string>& violations) {
    if (!r.has_exact) return;
    const auto cell = "(" + fmt(r.x) + ", " + fmt(r.y) + ")";
    if (!r.sandwich_ok) violations.push_back("sandwich bounds fail at " + cell);
    if (!r.pomerance_holds) violations.push_back("Psi < x rho(u) at " + cell);
}

int cmd_compare(const RunConfig& cfg, const Tolerances& tol) {
    std::vector<std::string> violations;
    if (!cfg.grid.empty()) {
        if (cfg.grid != "default") throw domain_error("unknown grid: " + cfg.grid);
        const auto grid = default_grid();
        double ymax = 2.0;
        for (const auto& c : grid.cells()) ymax = std::max(ymax, c.y);
        const auto table = make_table(ymax, tol);
        const auto reports = scan_reports(grid, table, tol);
        for (const auto& r : reports) check_report(r, violations);
        if (cfg.format == "csv") {
            std::cout << reports_to_csv(reports);
            for (const auto& v : violations) std::cerr << "violation: " << v << '\n';
        } else if (cfg.format == "json") {
            json doc = make_document(cfg);
            doc["reports"] = reports;
            doc["violations"] = violations;
            std::cout << doc.dump(2) << '\n';
        } else {
            for (const auto& r : reports) std::cout << report_text(r) << '\n';
            for (const auto& v : violations) std::cout << "violation: " << v << '\n';
        }
        return violations.empty() ? 0 : 1;
    }

    const auto table = make_table(cfg.y, tol);
    const auto report = build_report(cfg.x, cfg.y, table, tol);
    check_report(report, violations);
    json g_sigma;
    const bool want_zeros = !cfg.zeros_path.empty() || cfg.T > 0.0;
    if (want_zeros) {
        const auto zt = open_zeros(cfg.zeros_path);
        const double T = cfg.T > 0.0 ? cfg.T : zt.max_ordinate();
        const auto ctx = build_context(cfg.x, cfg.y, table, tol);
        g_sigma = g_breakdown(ctx.sigma, cfg.y, table, &zt, T, true);
    }
    if (cfg.format == "csv") {
        std::cout << report_csv_header() << "\r\n" << report_csv_row(report) << "\r\n";
        for (const auto& v : violations) std::cerr << "violation: " << v << '\n';
    } else if (cfg.format == "json") {
        json doc = make_document(cfg);
        doc["report"] = report;
        if (want_zeros) doc["g_sigma"] = g_sigma;
        doc["violations"] = violations;
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << report_text(report);
        if (want_zeros)
            std::cout << "logG1_zeros at sigma = " << g_sigma.at("logG1_zeros").dump()
                      << " +- " << g_sigma.at("logG1_zeros_error").dump() << '\n';
        for (const auto& v : violations) std::cout << "violation: " << v << '\n';
    }
    return violations.empty() ? 0 : 1;
}

int cmd_scan_pomerance(const RunConfig& cfg, const Tolerances& tol) {
    ScanGrid grid = default_grid();
    if (!cfg.grid.empty() && cfg.grid != "default")
        throw domain_error("unknown grid: " + cfg.grid);
    if (cfg.x > 0.0) grid.x_values = {cfg.x};
    if (cfg.y > 0.0) grid.y_rules = {{YRule::Kind::absolute, cfg.y}};
    double ymax = 2.0;
    for (const auto& c : grid.cells()) ymax = std::max(ymax, c.y);
    const auto table = make_table(ymax, tol);
    const auto cells = pomerance_scan(grid, table, tol);
    std::vector<std::string> violations;
    for (const auto& c : cells)
        if (c.evaluated && !c.holds)
            violations.push_back("Psi < x rho(u) at (" + fmt(c.x) + ", " + fmt(c.y) + ")");
    if (cfg.format == "csv") {
        std::cout << pomerance_csv_header() << "\r\n";
        for (const auto& c : cells) std::cout << pomerance_csv_row(c) << "\r\n";
        for (const auto& v : violations) std::cerr << "violation: " << v << '\n';
    } else if (cfg.format == "json") {
        json doc = make_document(cfg);
        doc["cells"] = cells;
        doc["violations"] = violations;
        std::cout << doc.dump(2) << '\n';
    } else {
        for (const auto& c : cells) {
            std::cout << "x = " << c.x << "  y = " << c.y;
            if (c.evaluated)
                std::cout << "  holds = " << (c.holds ? "yes" : "no")
                          << "  margin = " << c.margin << '\n';
            else
                std::cout << "  skipped: " << c.skip_reason << '\n';
        }
        for (const auto& v : violations) std::cout << "violation: " << v << '\n';
    }
    return violations.empty() ? 0 : 1;
}

int cmd_phase(const RunConfig& cfg, const Tolerances& tol) {
    const auto table = make_table(cfg.y, tol);
    const auto d = phase_diagnostic(cfg.x, cfg.y, table, tol);
    Fields fields;
    fields.emplace_back("x", fmt(d.x));
    fields.emplace_back("y", fmt(d.y));
    fields.emplace_back("u", fmt(d.u));
    fields.emplace_back("psi_exact", std::to_string(d.psi_exact));
    fields.emplace_back("D1", fmt(d.D1));
    fields.emplace_back("D2", fmt(d.D2));
    fields.emplace_back("S", fmt(d.S));
    fields.emplace_back("D1_over_S", fmt(d.d1_over_s));
    fields.emplace_back("D2_over_S", fmt(d.d2_over_s));
    fields.emplace_back("in_window", d.in_window ? "true" : "false");
    return finish(cfg, "phase", fields, {});
}

int cmd_constant_l(const RunConfig& cfg, double lo, double hi) {
    const auto res = constant_L_search(lo, hi);
    if (cfg.format == "csv") {
        std::cout << "L,v_argmax\r\n" << fmt(res.value) << ',' << fmt(res.argmax) << "\r\n";
        return 0;
    }
    Fields fields;
    fields.emplace_back("L", fmt(res.value));
    fields.emplace_back("v_argmax", fmt(res.argmax));
    fields.emplace_back("bracket_lo", fmt(lo));
    fields.emplace_back("bracket_hi", fmt(hi));
    fields.emplace_back("slope_at_argmax", fmt(constant_L_slope(res.argmax)));
    fields.emplace_back("drop_left", fmt(res.value - constant_L_objective(res.argmax - 1e-3)));
    fields.emplace_back("drop_right", fmt(res.value - constant_L_objective(res.argmax + 1e-3)));
    return finish(cfg, "constant_l", fields, {});
}

int cmd_zeros_check(const RunConfig& cfg, const Tolerances& tol) {
    const auto zt = open_zeros(cfg.zeros_path);
    std::size_t valid = 0, invalid = 0, skipped = 0;
    std::vector<std::string> violations;
    for (std::size_t i = 0; i < zt.count(); ++i) {
        const double gamma = zt.ordinates[i];
        try {
            if (validate_zero(gamma, 1e-3, tol))
                ++valid;
            else {
                ++invalid;
                violations.push_back("no sign change near ordinate " + fmt(gamma));
            }
        } catch (const resource_error&) {
            ++skipped;  // past the Euler-Maclaurin budget; not a verdict
        }
    }
    Fields fields;
    fields.emplace_back("zeros_loaded", std::to_string(zt.count()));
    fields.emplace_back("valid", std::to_string(valid));
    fields.emplace_back("invalid", std::to_string(invalid));
    fields.emplace_back("skipped", std::to_string(skipped));

    const auto table = make_table(1e4, tol);
    const double T = cfg.T > 0.0 ? cfg.T : std::min(100.0, zt.max_ordinate());
    std::vector<double> ys = cfg.y > 0.0 ? std::vector<double>{cfg.y}
                                         : std::vector<double>{1e3, 1e4};
    for (const double y : ys) {
        const double exact = chebyshev_psi(y, table) - y;
        const double viaz = psi_minus_y_via_zeros(y, T, zt);
        fields.emplace_back("psi_minus_y_exact_" + fmt(y), fmt(exact));
        fields.emplace_back("psi_minus_y_zeros_" + fmt(y), fmt(viaz));
        fields.emplace_back("gap_" + fmt(y), fmt(std::abs(exact - viaz)));
    }
    return finish(cfg, "zeros_check", fields, violations);
}

int cmd_g_decompose(const RunConfig& cfg, double s_arg, const Tolerances& tol) {
    const auto table = make_table(cfg.y, tol);
    double s = s_arg;
    if (s <= 0.0) {  // no --s: decompose at sigma(x, y)
        if (cfg.x <= 0.0) throw domain_error("g-decompose needs --s or --x");
        s = build_context(cfg.x, cfg.y, table, tol).sigma;
    }
    const bool want_zeros = !cfg.zeros_path.empty() || cfg.T > 0.0;
    GFactorBreakdown gb;
    if (want_zeros) {
        const auto zt = open_zeros(cfg.zeros_path);
        const double T = cfg.T > 0.0 ? cfg.T : zt.max_ordinate();
        gb = g_breakdown(s, cfg.y, table, &zt, T, true);
    } else {
        gb = g_breakdown(s, cfg.y, table);
    }
    if (cfg.format == "json") {
        json doc = make_document(cfg);
        doc["g_breakdown"] = gb;
        doc["violations"] = json::array();
        std::cout << doc.dump(2) << '\n';
        return 0;
    }
    Fields fields;
    fields.emplace_back("s", fmt(gb.s));
    fields.emplace_back("y", fmt(gb.y));
    fields.emplace_back("logG1_exact", fmt(gb.logG1_exact));
    fields.emplace_back("logG2_exact", fmt(gb.logG2_exact));
    fields.emplace_back("logG2_main", fmt(gb.logG2_main));
    fields.emplace_back("logG_total", fmt(gb.logG_total));
    if (gb.has_zeros) {
        fields.emplace_back("logG1_zeros", fmt(gb.logG1_zeros));
        fields.emplace_back("logG1_zeros_error", fmt(gb.logG1_zeros_error));
    }
    if (gb.has_rh) fields.emplace_back("logG_rh_formula", fmt(gb.logG_rh_formula));
    return finish(cfg, "g_breakdown", fields, {});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact and asymptotic counts of y-friable integers below x"};
    app.require_subcommand(1);

    RunConfig cfg;
    double u_arg = 0.0, s_arg = 0.0;
    std::vector<double> bracket{-10.0, 10.0};
    std::vector<std::string> tolspecs;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--tolerance", tolspecs, "override KEY=VAL (repeatable)");
        sub->add_option("--budget", cfg.budget, "exact-count budget override");
    };

    auto* c_count = app.add_subcommand("count", "exact Psi(x,y) with oracle cross-check");
    c_count->add_option("--x", cfg.x)->required();
    c_count->add_option("--y", cfg.y)->required();
    add_common(c_count);

    auto* c_rho = app.add_subcommand("rho", "Dickman rho at u or log x/log y");
    c_rho->add_option("--u", u_arg);
    c_rho->add_option("--x", cfg.x);
    c_rho->add_option("--y", cfg.y);
    add_common(c_rho);

    auto* c_xi = app.add_subcommand("xi", "the saddle parameter xi(u)");
    c_xi->add_option("--u", u_arg)->required();
    add_common(c_xi);

    auto* c_saddle = app.add_subcommand("saddle", "alpha, sigma and the Taylor data");
    c_saddle->add_option("--x", cfg.x)->required();
    c_saddle->add_option("--y", cfg.y)->required();
    add_common(c_saddle);

    auto* c_compare = app.add_subcommand("compare", "all approximations against the count");
    c_compare->add_option("--x", cfg.x);
    c_compare->add_option("--y", cfg.y);
    c_compare->add_option("--grid", cfg.grid, "named grid (default)");
    c_compare->add_option("--zeros-file", cfg.zeros_path);
    c_compare->add_option("--T", cfg.T);
    add_common(c_compare);

    auto* c_pom = app.add_subcommand("scan-pomerance", "Psi >= x rho(u) across a grid");
    c_pom->add_option("--grid", cfg.grid);
    c_pom->add_option("--x", cfg.x);
    c_pom->add_option("--y", cfg.y);
    add_common(c_pom);

    auto* c_phase = app.add_subcommand("phase", "window diagnostic D1, D2 vs the scale S");
    c_phase->add_option("--x", cfg.x)->required();
    c_phase->add_option("--y", cfg.y)->required();
    add_common(c_phase);

    auto* c_constl = app.add_subcommand("constant-l", "the constant L and its maximizer");
    c_constl->add_option("--bracket", bracket, "search interval")->expected(2);
    add_common(c_constl);

    auto* c_zeros = app.add_subcommand("zeros-check", "validate ordinates, compare psi(y)-y");
    c_zeros->add_option("--zeros-file", cfg.zeros_path);
    c_zeros->add_option("--T", cfg.T);
    c_zeros->add_option("--y", cfg.y);
    add_common(c_zeros);

    auto* c_gdec = app.add_subcommand("g-decompose", "logG1 + logG2 split at s");
    c_gdec->add_option("--s", s_arg);
    c_gdec->add_option("--x", cfg.x);
    c_gdec->add_option("--y", cfg.y)->required();
    c_gdec->add_option("--zeros-file", cfg.zeros_path);
    c_gdec->add_option("--T", cfg.T);
    add_common(c_gdec);

    CLI11_PARSE(app, argc, argv);

    Tolerances tol;
    try {
        for (const auto& spec : tolspecs) {
            tol.apply(spec);
            const auto eq = spec.find('=');
            cfg.tolerance_overrides[spec.substr(0, eq)] = std::strtod(spec.c_str() + eq + 1, nullptr);
        }
        if (cfg.budget > 0.0) tol.set("psi_exact_budget", cfg.budget);

        if (app.got_subcommand(c_count)) {
            cfg.subcommand = "count";
            return cmd_count(cfg, tol);
        }
        if (app.got_subcommand(c_rho)) {
            cfg.subcommand = "rho";
            if (u_arg <= 0.0 && !(cfg.x > 0.0 && cfg.y > 0.0))
                throw domain_error("rho needs --u or both --x and --y");
            return cmd_rho(cfg, u_arg);
        }
        if (app.got_subcommand(c_xi)) {
            cfg.subcommand = "xi";
            return cmd_xi(cfg, u_arg);
        }
        if (app.got_subcommand(c_saddle)) {
            cfg.subcommand = "saddle";
            return cmd_saddle(cfg, tol);
        }
        if (app.got_subcommand(c_compare)) {
            cfg.subcommand = "compare";
            if (cfg.grid.empty() && !(cfg.x > 0.0 && cfg.y > 0.0))
                throw domain_error("compare needs --grid or both --x and --y");
            return cmd_compare(cfg, tol);
        }
        if (app.got_subcommand(c_pom)) {
            cfg.subcommand = "scan-pomerance";
            return cmd_scan_pomerance(cfg, tol);
        }
        if (app.got_subcommand(c_phase)) {
            cfg.subcommand = "phase";
            return cmd_phase(cfg, tol);
        }
        if (app.got_subcommand(c_constl)) {
            cfg.subcommand = "constant-l";
            return cmd_constant_l(cfg, bracket[0], bracket[1]);
        }
        if (app.got_subcommand(c_zeros)) {
            cfg.subcommand = "zeros-check";
            return cmd_zeros_check(cfg, tol);
        }
        if (app.got_subcommand(c_gdec)) {
            cfg.subcommand = "g-decompose";
            return cmd_g_decompose(cfg, s_arg, tol);
        }
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
