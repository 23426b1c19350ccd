#pragma once

// Partial zeta function zeta(s,y), the saddle point alpha, the smooth-model
// companion sigma = 1 - xi(u)/log y, the functions g and f with derivatives,
// and the auxiliary factors B, H, C_sigma.

#include <cmath>
#include <cstddef>
#include <string>

#include <friable/config.hpp>
#include <friable/errors.hpp>
#include <friable/primes.hpp>
#include <friable/special.hpp>

namespace friable {

// k-th s-derivative of log zeta(s,y) = -sum_{p<=y} log(1 - p^{-s}).
// Every prime contributes a polynomial in q = 1/(p^s - 1), same family as the
// derivatives of 1/expm1: with L = log p,
//   k=0:  log(1+q)
//   k=1: -L q
//   k=2:  L^2 (q + q^2)
//   k=3: -L^3 (q + 3q^2 + 2q^3)
//   k=4:  L^4 (q + 7q^2 + 12q^3 + 6q^4)
inline double log_partial_zeta(double s, double y, const PrimeTable& table, int k) {
    if (!(s > 0.0))
        throw domain_error("log_partial_zeta: need s > 0 (sum diverges at s = 0), got s = " +
                           std::to_string(s));
    if (k < 0 || k > 4) throw domain_error("log_partial_zeta: derivative order must be 0..4");
    if (!(y <= static_cast<double>(table.limit)))
        throw domain_error("log_partial_zeta: y = " + std::to_string(y) +
                           " exceeds prime table limit " + std::to_string(table.limit));
    double sum = 0.0;
    for (std::size_t i = 0; i < table.primes.size(); ++i) {
        const double p = static_cast<double>(table.primes[i]);
        if (p > y) break;
        const double L = table.logs[i];
        const double q = 1.0 / std::expm1(s * L);
        switch (k) {
            case 0: sum += std::log1p(q); break;
            case 1: sum -= L * q; break;
            case 2: sum += L * L * q * (1.0 + q); break;
            case 3: sum -= L * L * L * q * (1.0 + q * (3.0 + 2.0 * q)); break;
            default: {
                const double L2 = L * L;
                sum += L2 * L2 * q * (1.0 + q * (7.0 + q * (12.0 + 6.0 * q)));
                break;
            }
        }
    }
    return sum;
}

// g(t) = t log x + log zeta(t,y) evaluated directly.
inline double g_value(double t, double x, double y, const PrimeTable& table) {
    return t * std::log(x) + log_partial_zeta(t, y, table, 0);
}

// f(t) = t log x + log F(t,y), where
// log F(t,y) = log(zeta(t)(t-1)) + log log y + gamma + I((1-t) log y).
inline double f_value(double t, double x, double y) {
    const double ly = std::log(y);
    return t * std::log(x) + log_phi_deriv(0, t) + std::log(ly) + k_gamma +
           big_I((1.0 - t) * ly);
}

// First-order size model for alpha: log(1 + y/log x)/log y.
inline double alpha_size_estimate(double x, double y) {
    return std::log1p(y / std::log(x)) / std::log(y);
}

// Root of sum_{p<=y} log p/(p^alpha - 1) = log x, i.e. g'(alpha) = 0.
// g' is strictly increasing, so bisection on [1e-8, 1.5] is safe; Newton
// finishes once the bracket is tight.
inline double solve_alpha(double x, double y, const PrimeTable& table,
                          const Tolerances& tol = Tolerances{}) {
    if (!(x >= y && y >= 2.0))
        throw domain_error("solve_alpha: need x >= y >= 2");
    if (!(y <= static_cast<double>(table.limit)))
        throw domain_error("solve_alpha: y exceeds prime table limit");
    const double lx = std::log(x);
    auto gp = [&](double s) { return lx + log_partial_zeta(s, y, table, 1); };
    double lo = 1e-8, hi = 1.5;
    if (!(gp(lo) < 0.0) || !(gp(hi) > 0.0))
        throw numeric_error("solve_alpha: saddle equation not bracketed by [1e-8, 1.5]");
    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        (gp(mid) < 0.0 ? lo : hi) = mid;
    }
    double a = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        const double r = gp(a);
        if (std::abs(r) <= tol.alpha_residual_tol * lx) return a;
        (r < 0.0 ? lo : hi) = a;
        const double step = r / log_partial_zeta(a, y, table, 2);
        double next = a - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == a) return a;  // stationary at double precision
        a = next;
    }
    if (std::abs(gp(a)) > 1e3 * tol.alpha_residual_tol * lx)
        throw numeric_error("solve_alpha: Newton iteration failed to converge");
    return a;
}

struct SaddleContext {
    double x = 0.0;
    double y = 0.0;
    double u = 0.0;        // log x / log y
    double xi_u = 0.0;     // xi(u)
    double sigma = 0.0;    // 1 - xi(u)/log y
    double alpha = 0.0;    // saddle point
    double g_derivs[5] = {0.0, 0.0, 0.0, 0.0, 0.0};  // g^(k)(alpha), k = 0..4
    double f_derivs[5] = {0.0, 0.0, 0.0, 0.0, 0.0};  // f^(k)(sigma), k = 0..4
    double B = 0.0;        // (sigma/alpha) sqrt(I''(xi) log^2 y) / sqrt(g''(alpha))
    double H = 0.0;        // (expm1(d L) - expm1(d L/2))/(d L), d = 1-2alpha, L = log y
    double C_sigma = 0.0;  // (log(zeta(s)(s-1)))'(sigma)
    double g_at_sigma = 0.0;  // g(sigma), kept for the direct Taylor gap
    double f_at_alpha = 0.0;  // f(alpha)
    bool near_boundary = false;  // y <= 2 log x: error terms degrade
};

inline SaddleContext build_context(double x, double y, const PrimeTable& table,
                                   const Tolerances& tol = Tolerances{}) {
    const double lx = std::log(x);
    if (!(x >= y)) throw domain_error("build_context: need x >= y");
    if (!(y > 1.0 + lx))
        throw domain_error("build_context: y <= 1 + log x puts sigma below the sigma >= 0 boundary");
    if (!(y <= static_cast<double>(table.limit)))
        throw domain_error("build_context: y exceeds prime table limit");

    SaddleContext c;
    c.x = x;
    c.y = y;
    const double ly = std::log(y);
    c.u = lx / ly;
    c.xi_u = xi(c.u).xi;
    c.sigma = 1.0 - c.xi_u / ly;
    c.alpha = solve_alpha(x, y, table, tol);
    c.near_boundary = (y <= 2.0 * lx);

    for (int k = 0; k <= 4; ++k) c.g_derivs[k] = log_partial_zeta(c.alpha, y, table, k);
    c.g_derivs[0] += c.alpha * lx;
    c.g_derivs[1] += lx;

    const double r = c.xi_u;  // (1 - sigma) log y
    c.f_derivs[0] = c.sigma * lx + log_phi_deriv(0, c.sigma) + std::log(ly) + k_gamma + big_I(r);
    double pw = -ly;  // (-log y)^k
    c.f_derivs[1] = lx + log_phi_deriv(1, c.sigma) + pw * big_I_deriv(1, r);
    for (int k = 2; k <= 4; ++k) {
        pw *= -ly;
        c.f_derivs[k] = log_phi_deriv(k, c.sigma) + pw * big_I_deriv(k, r);
    }

    if (!(c.g_derivs[2] > 0.0) || !(c.f_derivs[2] > 0.0))
        throw numeric_error("build_context: second derivative positivity lost");

    c.B = (c.sigma / c.alpha) * ly * std::sqrt(big_I_deriv(2, c.xi_u)) / std::sqrt(c.g_derivs[2]);
    const double a = (1.0 - 2.0 * c.alpha) * ly;
    c.H = std::abs(a) < 1e-6 ? 0.5 + a * (3.0 / 8.0 + a * (7.0 / 48.0))
                             : (std::expm1(a) - std::expm1(0.5 * a)) / a;
    c.C_sigma = friable::C_sigma(c.sigma);
    c.g_at_sigma = g_value(c.sigma, x, y, table);
    c.f_at_alpha = f_value(c.alpha, x, y);
    return c;
}

// g(alpha) - g(sigma) by direct evaluation at both points; <= 0 since alpha
// minimizes g. The quadratic Taylor surrogate is a diagnostic, never used here.
inline double taylor_gap_g(const SaddleContext& c) { return c.g_derivs[0] - c.g_at_sigma; }

// f(alpha) - f(sigma), again by direct evaluation.
inline double taylor_gap_f(const SaddleContext& c) { return c.f_at_alpha - c.f_derivs[0]; }

// Decomposition of the f gap: f'(sigma) = C_sigma exactly (the log x and
// I'-terms cancel at sigma), so the linear part is C_sigma (alpha - sigma).
struct TaylorGapF {
    double gap = 0.0;        // f(alpha) - f(sigma)
    double linear = 0.0;     // C_sigma (alpha - sigma)
    double quadratic = 0.0;  // f''(sigma) (alpha - sigma)^2 / 2
    double residual = 0.0;   // gap - linear - quadratic (third order)
};

inline TaylorGapF taylor_gap_f_parts(const SaddleContext& c) {
    TaylorGapF parts;
    const double h = c.alpha - c.sigma;
    parts.gap = taylor_gap_f(c);
    parts.linear = c.C_sigma * h;
    parts.quadratic = 0.5 * c.f_derivs[2] * h * h;
    parts.residual = parts.gap - parts.linear - parts.quadratic;
    return parts;
}

// Model value for sigma - alpha: (G'/G(alpha,y) + C_sigma) / f''(sigma).
// The caller supplies G'/G (a gfactor quantity) to keep this module closed.
inline double sigma_alpha_gap_model(const SaddleContext& c, double g_over_G) {
    return (g_over_G + c.C_sigma) / c.f_derivs[2];
}

}  // namespace friable
