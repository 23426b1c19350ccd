#pragma once

// Report serialization: JSON (round-trippable), RFC-4180 CSV, and plain text.
// Every document carries schema_version and an echo of the run configuration.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <friable/approx.hpp>
#include <friable/gfactor.hpp>

namespace friable {

inline constexpr int schema_version = 1;

struct RunConfig {
    std::string subcommand;
    double x = 0.0, y = 0.0;   // 0 = unset
    std::string grid;          // "default" or empty
    std::string zeros_path;
    double T = 0.0;
    std::string format = "text";
    double budget = 0.0;       // psi_exact_budget override, 0 = default
    std::map<std::string, double> tolerance_overrides;
};

namespace detail {

// NaN/inf have no JSON literal; encode as null and decode back to NaN
inline nlohmann::json num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

inline double num(const nlohmann::json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

// shortest-precision decimal that still round-trips a double
inline std::string csv_num(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{{"subcommand", c.subcommand},
                       {"x", detail::num(c.x)},
                       {"y", detail::num(c.y)},
                       {"grid", c.grid},
                       {"zeros_path", c.zeros_path},
                       {"T", detail::num(c.T)},
                       {"format", c.format},
                       {"budget", detail::num(c.budget)},
                       {"tolerance_overrides", c.tolerance_overrides}};
}

inline void from_json(const nlohmann::json& j, RunConfig& c) {
    j.at("subcommand").get_to(c.subcommand);
    c.x = detail::num(j.at("x"));
    c.y = detail::num(j.at("y"));
    j.at("grid").get_to(c.grid);
    j.at("zeros_path").get_to(c.zeros_path);
    c.T = detail::num(j.at("T"));
    j.at("format").get_to(c.format);
    c.budget = detail::num(j.at("budget"));
    j.at("tolerance_overrides").get_to(c.tolerance_overrides);
}

inline void to_json(nlohmann::json& j, const ApproximationReport& r) {
    j = nlohmann::json{{"x", r.x},
                       {"y", r.y},
                       {"u", r.u},
                       {"has_exact", r.has_exact},
                       {"psi_exact", r.psi_exact},
                       {"x_rho", detail::num(r.x_rho)},
                       {"lambda_debruijn", detail::num(r.lambda_debruijn)},
                       {"ht_saddle", detail::num(r.ht_saddle)},
                       {"x_rho_Z", detail::num(r.x_rho_Z)},
                       {"main_formula_sigma", detail::num(r.main_formula_sigma)},
                       {"main_formula_alpha", detail::num(r.main_formula_alpha)},
                       {"sharp_corrected", detail::num(r.sharp_corrected)},
                       {"ratios", r.ratios},
                       {"pomerance_holds", r.pomerance_holds},
                       {"sandwich_ok", r.sandwich_ok},
                       {"near_boundary", r.near_boundary},
                       {"skip_reason", r.skip_reason}};
}

inline void from_json(const nlohmann::json& j, ApproximationReport& r) {
    r.x = j.at("x").get<double>();
    r.y = j.at("y").get<double>();
    r.u = j.at("u").get<double>();
    r.has_exact = j.at("has_exact").get<bool>();
    r.psi_exact = j.at("psi_exact").get<std::uint64_t>();
    r.x_rho = detail::num(j.at("x_rho"));
    r.lambda_debruijn = detail::num(j.at("lambda_debruijn"));
    r.ht_saddle = detail::num(j.at("ht_saddle"));
    r.x_rho_Z = detail::num(j.at("x_rho_Z"));
    r.main_formula_sigma = detail::num(j.at("main_formula_sigma"));
    r.main_formula_alpha = detail::num(j.at("main_formula_alpha"));
    r.sharp_corrected = detail::num(j.at("sharp_corrected"));
    j.at("ratios").get_to(r.ratios);
    r.pomerance_holds = j.at("pomerance_holds").get<bool>();
    r.sandwich_ok = j.at("sandwich_ok").get<bool>();
    r.near_boundary = j.at("near_boundary").get<bool>();
    j.at("skip_reason").get_to(r.skip_reason);
}

inline void to_json(nlohmann::json& j, const PomeranceCell& c) {
    j = nlohmann::json{{"x", c.x},
                       {"y", c.y},
                       {"evaluated", c.evaluated},
                       {"holds", c.holds},
                       {"margin", detail::num(c.margin)},
                       {"skip_reason", c.skip_reason}};
}

inline void from_json(const nlohmann::json& j, PomeranceCell& c) {
    c.x = j.at("x").get<double>();
    c.y = j.at("y").get<double>();
    c.evaluated = j.at("evaluated").get<bool>();
    c.holds = j.at("holds").get<bool>();
    c.margin = detail::num(j.at("margin"));
    j.at("skip_reason").get_to(c.skip_reason);
}

inline void to_json(nlohmann::json& j, const PhaseDiagnostic& d) {
    j = nlohmann::json{{"x", d.x},
                       {"y", d.y},
                       {"u", d.u},
                       {"psi_exact", d.psi_exact},
                       {"D1", detail::num(d.D1)},
                       {"D2", detail::num(d.D2)},
                       {"S", detail::num(d.S)},
                       {"d1_over_s", detail::num(d.d1_over_s)},
                       {"d2_over_s", detail::num(d.d2_over_s)},
                       {"in_window", d.in_window}};
}

inline void from_json(const nlohmann::json& j, PhaseDiagnostic& d) {
    d.x = j.at("x").get<double>();
    d.y = j.at("y").get<double>();
    d.u = j.at("u").get<double>();
    d.psi_exact = j.at("psi_exact").get<std::uint64_t>();
    d.D1 = detail::num(j.at("D1"));
    d.D2 = detail::num(j.at("D2"));
    d.S = detail::num(j.at("S"));
    d.d1_over_s = detail::num(j.at("d1_over_s"));
    d.d2_over_s = detail::num(j.at("d2_over_s"));
    d.in_window = j.at("in_window").get<bool>();
}

inline void to_json(nlohmann::json& j, const IneqReport& r) {
    j = nlohmann::json{{"x", r.x},
                       {"y", r.y},
                       {"u", r.u},
                       {"psi_exact", r.psi_exact},
                       {"lhs", detail::num(r.lhs)},
                       {"log_rho", detail::num(r.log_rho)},
                       {"logG2_sigma", detail::num(r.logG2_sigma)},
                       {"residual", detail::num(r.residual)},
                       {"order_ratio", detail::num(r.order_ratio)}};
}

inline void from_json(const nlohmann::json& j, IneqReport& r) {
    r.x = j.at("x").get<double>();
    r.y = j.at("y").get<double>();
    r.u = j.at("u").get<double>();
    r.psi_exact = j.at("psi_exact").get<std::uint64_t>();
    r.lhs = detail::num(j.at("lhs"));
    r.log_rho = detail::num(j.at("log_rho"));
    r.logG2_sigma = detail::num(j.at("logG2_sigma"));
    r.residual = detail::num(j.at("residual"));
    r.order_ratio = detail::num(j.at("order_ratio"));
}

inline void to_json(nlohmann::json& j, const ConstantLResult& r) {
    j = nlohmann::json{{"value", r.value}, {"argmax", r.argmax}};
}

inline void from_json(const nlohmann::json& j, ConstantLResult& r) {
    r.value = j.at("value").get<double>();
    r.argmax = j.at("argmax").get<double>();
}

inline void to_json(nlohmann::json& j, const GFactorBreakdown& b) {
    j = nlohmann::json{{"s", b.s},
                       {"y", b.y},
                       {"logG1_exact", detail::num(b.logG1_exact)},
                       {"logG1_zeros", detail::num(b.logG1_zeros)},
                       {"logG1_zeros_error", detail::num(b.logG1_zeros_error)},
                       {"logG2_exact", detail::num(b.logG2_exact)},
                       {"logG2_main", detail::num(b.logG2_main)},
                       {"logG_total", detail::num(b.logG_total)},
                       {"logG_rh_formula", detail::num(b.logG_rh_formula)},
                       {"has_zeros", b.has_zeros},
                       {"has_rh", b.has_rh}};
}

inline void from_json(const nlohmann::json& j, GFactorBreakdown& b) {
    b.s = j.at("s").get<double>();
    b.y = j.at("y").get<double>();
    b.logG1_exact = detail::num(j.at("logG1_exact"));
    b.logG1_zeros = detail::num(j.at("logG1_zeros"));
    b.logG1_zeros_error = detail::num(j.at("logG1_zeros_error"));
    b.logG2_exact = detail::num(j.at("logG2_exact"));
    b.logG2_main = detail::num(j.at("logG2_main"));
    b.logG_total = detail::num(j.at("logG_total"));
    b.logG_rh_formula = detail::num(j.at("logG_rh_formula"));
    b.has_zeros = j.at("has_zeros").get<bool>();
    b.has_rh = j.at("has_rh").get<bool>();
}

// top-level document: schema version + config echo + named payload
inline nlohmann::json make_document(const RunConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["config"] = cfg;
    return j;
}

// ---- CSV ----------------------------------------------------------------

inline std::string report_csv_header() {
    return "x,y,u,has_exact,psi_exact,x_rho,lambda_debruijn,ht_saddle,x_rho_Z,"
           "main_formula_sigma,main_formula_alpha,sharp_corrected,"
           "ratio_x_rho,ratio_lambda,ratio_ht_saddle,ratio_x_rho_Z,"
           "ratio_main_sigma,ratio_main_alpha,ratio_sharp,"
           "pomerance_holds,sandwich_ok,near_boundary,skip_reason";
}

inline std::string report_csv_row(const ApproximationReport& r) {
    using detail::csv_num;
    const auto ratio = [&](const char* key) {
        const auto it = r.ratios.find(key);
        return it == r.ratios.end() ? std::string() : csv_num(it->second);
    };
    std::ostringstream os;
    os << csv_num(r.x) << ',' << csv_num(r.y) << ',' << csv_num(r.u) << ','
       << (r.has_exact ? "true" : "false") << ','
       << (r.has_exact ? std::to_string(r.psi_exact) : std::string()) << ','
       << csv_num(r.x_rho) << ',' << csv_num(r.lambda_debruijn) << ','
       << csv_num(r.ht_saddle) << ',' << csv_num(r.x_rho_Z) << ','
       << csv_num(r.main_formula_sigma) << ',' << csv_num(r.main_formula_alpha) << ','
       << csv_num(r.sharp_corrected) << ',' << ratio("x_rho") << ','
       << ratio("lambda") << ',' << ratio("ht_saddle") << ',' << ratio("x_rho_Z") << ','
       << ratio("main_sigma") << ',' << ratio("main_alpha") << ',' << ratio("sharp") << ','
       << (r.pomerance_holds ? "true" : "false") << ','
       << (r.sandwich_ok ? "true" : "false") << ','
       << (r.near_boundary ? "true" : "false") << ','
       << detail::csv_quote(r.skip_reason);
    return os.str();
}

inline std::string reports_to_csv(const std::vector<ApproximationReport>& reports) {
    std::string out = report_csv_header() + "\r\n";
    for (const auto& r : reports) out += report_csv_row(r) + "\r\n";
    return out;
}

inline std::string pomerance_csv_header() { return "x,y,evaluated,holds,margin,skip_reason"; }

inline std::string pomerance_csv_row(const PomeranceCell& c) {
    std::ostringstream os;
    os << detail::csv_num(c.x) << ',' << detail::csv_num(c.y) << ','
       << (c.evaluated ? "true" : "false") << ',' << (c.holds ? "true" : "false") << ','
       << (c.evaluated ? detail::csv_num(c.margin) : std::string()) << ','
       << detail::csv_quote(c.skip_reason);
    return os.str();
}

// ---- text ---------------------------------------------------------------

inline std::string report_text(const ApproximationReport& r) {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "x = " << r.x << "  y = " << r.y << "  u = " << r.u << '\n';
    if (r.has_exact)
        os << "psi_exact          " << r.psi_exact << '\n';
    else
        os << "psi_exact          skipped: " << r.skip_reason << '\n';
    os << "x_rho              " << r.x_rho << '\n'
       << "lambda_debruijn    " << r.lambda_debruijn << '\n'
       << "ht_saddle          " << r.ht_saddle << '\n'
       << "x_rho_Z            " << r.x_rho_Z << '\n'
       << "main_formula_sigma " << r.main_formula_sigma << '\n'
       << "main_formula_alpha " << r.main_formula_alpha << '\n'
       << "sharp_corrected    " << r.sharp_corrected << '\n';
    for (const auto& [k, v] : r.ratios) os << "ratio " << k << " = " << v << '\n';
    if (r.has_exact)
        os << "pomerance_holds " << r.pomerance_holds << "  sandwich_ok " << r.sandwich_ok
           << "  near_boundary " << r.near_boundary << '\n';
    return os.str();
}

}  // namespace friable
