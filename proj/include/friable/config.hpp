#pragma once

// One table for every calibrated slack and budget, so calibration stays
// auditable.  Override entries with "key=value" strings (CLI --tolerance).

#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include "errors.hpp"

namespace friable {

struct Tolerances {
    // ratio-band slacks for asymptotic claims
    double saddle_ratio_slack = 5.0;   // rho solver vs saddle: 1 +- slack/u
    double ht_rel_slack = 2.0;         // saddle-point formula: rel err <= slack/u
    double main_rel_slack = 3.0;       // corrected main formula: rel err <= slack/u
    double sandwich_delta = 0.5;       // G-sandwich slack delta
    double logg2_band = 10.0;          // logG2 * y log y/(log x)^2 in [1/band, band]
    double g1_sigma_slack = 10.0;      // |logG1(sigma0,y)| <= slack*y^{1/2-s}(log y)^2
    double psi_zeros_slack = 20.0;     // explicit formula vs psi(y)-y: slack*(log y)^2
    double ineq_residual_band = 0.1;   // identity residual / |log rho|

    // agreement tolerances
    double forms_agree_tol = 1e-9;     // two algebraic forms of the main formula
    double g_identity_tol = 1e-10;     // logG = logG1 + logG2 decomposition
    double rho_closed_tol = 1e-10;     // rho vs 1 - log t on [1,2]
    double const_l_tol = 1e-5;         // constant L

    // solver targets
    double xi_residual_scale = 1e-12;  // residual <= scale*(1 + u*xi)
    double alpha_residual_tol = 1e-10; // saddle-point equation residual
    double series_rel_tol = 1e-14;     // power-series truncation
    double quad_abs_tol = 1e-10;       // adaptive quadrature

    // budgets
    std::uint64_t enum_node_budget = 600000000;  // DFS nodes for exact counts
    std::uint64_t psi_exact_budget = 100000000;  // largest admissible Psi estimate
    std::uint64_t sieve_limit_cap = 1000000000;  // prime table hard cap
    double hardy_gamma_budget = 500.0;           // critical-line evaluation cap

    void set(const std::string& key, double value);
    void apply(const std::string& key_eq_value);
};

inline void Tolerances::set(const std::string& key, double value) {
    if (key == "saddle_ratio_slack") saddle_ratio_slack = value;
    else if (key == "ht_rel_slack") ht_rel_slack = value;
    else if (key == "main_rel_slack") main_rel_slack = value;
    else if (key == "sandwich_delta") sandwich_delta = value;
    else if (key == "logg2_band") logg2_band = value;
    else if (key == "g1_sigma_slack") g1_sigma_slack = value;
    else if (key == "psi_zeros_slack") psi_zeros_slack = value;
    else if (key == "ineq_residual_band") ineq_residual_band = value;
    else if (key == "forms_agree_tol") forms_agree_tol = value;
    else if (key == "g_identity_tol") g_identity_tol = value;
    else if (key == "rho_closed_tol") rho_closed_tol = value;
    else if (key == "const_l_tol") const_l_tol = value;
    else if (key == "xi_residual_scale") xi_residual_scale = value;
    else if (key == "alpha_residual_tol") alpha_residual_tol = value;
    else if (key == "series_rel_tol") series_rel_tol = value;
    else if (key == "quad_abs_tol") quad_abs_tol = value;
    else if (key == "enum_node_budget") enum_node_budget = std::uint64_t(value);
    else if (key == "psi_exact_budget") psi_exact_budget = std::uint64_t(value);
    else if (key == "sieve_limit_cap") sieve_limit_cap = std::uint64_t(value);
    else if (key == "hardy_gamma_budget") hardy_gamma_budget = value;
    else throw format_error("unknown tolerance key: " + key);
}

inline void Tolerances::apply(const std::string& key_eq_value) {
    const auto eq = key_eq_value.find('=');
    if (eq == std::string::npos || eq == 0)
        throw format_error("tolerance override must look like KEY=VALUE: " + key_eq_value);
    const std::string key = key_eq_value.substr(0, eq);
    const std::string val = key_eq_value.substr(eq + 1);
    std::istringstream in(val);
    double v = 0.0;
    if (!(in >> v) || !(in >> std::ws).eof())
        throw format_error("bad tolerance value in: " + key_eq_value);
    set(key, v);
}

} // namespace friable
