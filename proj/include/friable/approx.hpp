#pragma once

// The Psi(x,y) approximation ladder: x rho(u), de Bruijn's Lambda, the
// Hildebrand-Tenenbaum saddle point, x rho(u) Z(sigma), the main formula in
// both forms, sharp corrections, the Pomerance scan, the phase diagnostic,
// and the constant L.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include <friable/config.hpp>
#include <friable/errors.hpp>
#include <friable/gfactor.hpp>
#include <friable/primes.hpp>
#include <friable/saddle.hpp>
#include <friable/special.hpp>

namespace friable {

// one process-wide Dickman table; immutable after construction
inline const DickmanSolver& shared_dickman() {
    static const DickmanSolver solver(64.0);
    return solver;
}

// Z(t) = zeta(t)(t-1)/t, pole-free via phi(t) = zeta(t)(t-1); Z(1) = 1
inline double log_Z(double t) {
    if (!(t > 0.0)) throw domain_error("log_Z: need t > 0");
    return log_phi_deriv(0, t) - std::log(t);
}

inline double approx_x_rho(double x, double y) {
    if (!(x >= 1.0 && y >= 2.0)) throw domain_error("approx_x_rho: need x >= 1, y >= 2");
    return x * shared_dickman().rho(std::log(x) / std::log(y));
}

// Lambda(x,y) = x rho(u) - {x} + int_0^{u-1} (-rho'(u-v)) {y^v} y^{-v} dv with
// -rho'(t) = rho(t-1)/t.  Integer x is nudged to x + 1/2 (Lambda(x,y) =
// Lambda(x+,y)).  The sawtooth {y^v} jumps at v = log n/log y and rho' has
// kinks where u-v-1 is an integer, so we cut at both and apply fixed Gauss
// quadrature on each smooth piece.
inline double approx_debruijn_lambda(double x, double y) {
    if (!(x >= 2.0 && y >= 2.0)) throw domain_error("approx_debruijn_lambda: need x, y >= 2");
    if (std::floor(x) == x) x += 0.5;
    const double ly = std::log(y);
    const double u = std::log(x) / ly;
    const auto& solver = shared_dickman();
    const double base = x * solver.rho(u) - (x - std::floor(x));
    if (u <= 1.0) return base;
    if (x / y > 5e6)
        throw resource_error("approx_debruijn_lambda: " + std::to_string(x / y) +
                             " sawtooth pieces exceed the budget");

    const double vmax = u - 1.0;
    const std::uint64_t top = detail::floor_u64(x / y);
    std::vector<double> cuts;
    cuts.reserve(top + 8);
    cuts.push_back(0.0);
    for (std::uint64_t n = 2; n <= top; ++n) cuts.push_back(std::log(double(n)) / ly);
    for (int m = 1; u - 1.0 - m > 0.0; ++m) cuts.push_back(u - 1.0 - m);
    cuts.push_back(vmax);
    std::sort(cuts.begin(), cuts.end());

    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b - a < 1e-15) continue;
        const double n = double(detail::floor_u64(std::exp(0.5 * (a + b) * ly)));
        auto f = [&](double v) {
            return solver.rho(std::max(0.0, u - v - 1.0)) / (u - v) *
                   (1.0 - n * std::exp(-v * ly));
        };
        integral += boost::math::quadrature::gauss<double, 15>::integrate(f, a, b);
    }
    return base + integral;
}

// x^alpha zeta(alpha,y)/(alpha sqrt(2 pi g''(alpha))) = exp(g(alpha))/(...)
inline double approx_ht_saddle(const SaddleContext& c) {
    return std::exp(c.g_derivs[0] - std::log(c.alpha) -
                    0.5 * std::log(2.0 * M_PI * c.g_derivs[2]));
}

inline double log_x_rho_Z(const SaddleContext& c) {
    return std::log(c.x) + std::log(shared_dickman().rho(c.u)) + log_Z(c.sigma);
}

inline double x_rho_Z(const SaddleContext& c) { return std::exp(log_x_rho_Z(c)); }

struct MainFormulaForms {
    double form_sigma = 0.0;
    double form_alpha = 0.0;
};

// Psi ~ x rho(u) Z(sigma) * G(sigma,y) exp(g(alpha)-g(sigma)) B
//     = x rho(u) Z(sigma) * G(alpha,y) exp(f(alpha)-f(sigma)) B
inline MainFormulaForms main_formula(const SaddleContext& c, const GFactorBreakdown& at_sigma,
                                     const GFactorBreakdown& at_alpha) {
    if (at_sigma.s != c.sigma || at_alpha.s != c.alpha || at_sigma.y != c.y ||
        at_alpha.y != c.y)
        throw domain_error("main_formula: breakdowns must be taken at (sigma, y), (alpha, y)");
    const double base = log_x_rho_Z(c) + std::log(c.B);
    const double ls = base + at_sigma.logG_total + (c.g_derivs[0] - c.g_at_sigma);
    const double la = base + at_alpha.logG_total + (c.f_at_alpha - c.f_derivs[0]);
    return {std::exp(ls), std::exp(la)};
}

inline MainFormulaForms main_formula(const SaddleContext& c, const PrimeTable& pt) {
    return main_formula(c, g_breakdown(c.sigma, c.y, pt), g_breakdown(c.alpha, c.y, pt));
}

// 1 + (1/8)(g4/g2^2 - f4/f2^2) - (5/24)(g3^2/g2^3 - f3^2/f2^3), the
// second-order saddle refinement
inline double sharp_corrections(const SaddleContext& c) {
    const double g2 = c.g_derivs[2], g3 = c.g_derivs[3], g4 = c.g_derivs[4];
    const double f2 = c.f_derivs[2], f3 = c.f_derivs[3], f4 = c.f_derivs[4];
    return 1.0 + (g4 / (g2 * g2) - f4 / (f2 * f2)) / 8.0 -
           5.0 / 24.0 * (g3 * g3 / (g2 * g2 * g2) - f3 * f3 / (f2 * f2 * f2));
}

struct ApproximationReport {
    double x = 0.0, y = 0.0, u = 0.0;
    bool has_exact = false;
    std::uint64_t psi_exact = 0;
    double x_rho = 0.0;
    double lambda_debruijn = 0.0;
    double ht_saddle = 0.0;
    double x_rho_Z = 0.0;
    double main_formula_sigma = 0.0;
    double main_formula_alpha = 0.0;
    double sharp_corrected = 0.0;
    std::map<std::string, double> ratios;  // approximation / psi_exact
    bool pomerance_holds = false;
    bool sandwich_ok = false;
    bool near_boundary = false;
    std::string skip_reason;  // set when the exact count was skipped
};

inline ApproximationReport build_report(double x, double y, const PrimeTable& pt,
                                        const Tolerances& tol = {}) {
    ApproximationReport r;
    r.x = x;
    r.y = y;
    r.u = std::log(x) / std::log(y);
    const auto ctx = build_context(x, y, pt, tol);
    r.near_boundary = ctx.near_boundary;
    const auto at_sigma = g_breakdown(ctx.sigma, y, pt);
    const auto at_alpha = g_breakdown(ctx.alpha, y, pt);
    r.x_rho = approx_x_rho(x, y);
    try {
        r.lambda_debruijn = approx_debruijn_lambda(x, y);
    } catch (const resource_error& e) {
        // x/y too large for the piecewise integration; the other
        // approximations are still cheap, so keep going
        r.lambda_debruijn = std::numeric_limits<double>::quiet_NaN();
        r.skip_reason = e.what();
    }
    r.ht_saddle = approx_ht_saddle(ctx);
    r.x_rho_Z = x_rho_Z(ctx);
    const auto forms = main_formula(ctx, at_sigma, at_alpha);
    r.main_formula_sigma = forms.form_sigma;
    r.main_formula_alpha = forms.form_alpha;
    r.sharp_corrected = forms.form_sigma * sharp_corrections(ctx);
    try {
        r.psi_exact = psi_smooth_exact(x, y, pt, tol);
        r.has_exact = true;
    } catch (const resource_error& e) {
        r.skip_reason = e.what();
    }
    if (r.has_exact) {
        const double psi = double(r.psi_exact);
        r.ratios["x_rho"] = r.x_rho / psi;
        r.ratios["lambda"] = r.lambda_debruijn / psi;
        r.ratios["ht_saddle"] = r.ht_saddle / psi;
        r.ratios["x_rho_Z"] = r.x_rho_Z / psi;
        r.ratios["main_sigma"] = r.main_formula_sigma / psi;
        r.ratios["main_alpha"] = r.main_formula_alpha / psi;
        r.ratios["sharp"] = r.sharp_corrected / psi;
        r.pomerance_holds = psi >= r.x_rho;
        const double mid = psi / r.x_rho_Z;
        r.sandwich_ok = std::exp(at_alpha.logG_total) * (1.0 - tol.sandwich_delta) <= mid &&
                        mid <= std::exp(at_sigma.logG_total) * (1.0 + tol.sandwich_delta);
    }
    return r;
}

struct YRule {
    enum class Kind { absolute, log_power, log_multiple };
    Kind kind = Kind::absolute;
    double value = 0.0;
    double apply(double x) const {
        switch (kind) {
            case Kind::log_power: return std::ceil(std::pow(std::log(x), value));
            case Kind::log_multiple: return std::ceil(value * std::log(x));
            default: return value;
        }
    }
};

struct GridCell {
    double x = 0.0, y = 0.0;
};

struct ScanGrid {
    std::vector<double> x_values;
    std::vector<YRule> y_rules;
    // expanded cells with x >= 2y >= 4, sorted by (x, y), duplicates removed
    std::vector<GridCell> cells() const {
        std::vector<GridCell> out;
        for (double x : x_values)
            for (const auto& rule : y_rules) {
                const double y = rule.apply(x);
                if (y >= 2.0 && y <= x / 2.0) out.push_back({x, y});
            }
        std::sort(out.begin(), out.end(), [](const GridCell& a, const GridCell& b) {
            return a.x != b.x ? a.x < b.x : a.y < b.y;
        });
        out.erase(std::unique(out.begin(), out.end(),
                              [](const GridCell& a, const GridCell& b) {
                                  return a.x == b.x && a.y == b.y;
                              }),
                  out.end());
        return out;
    }
};

// straddles both critical exponents 3/2 and 2 of log x
inline ScanGrid default_grid() {
    ScanGrid g;
    g.x_values = {1e4, 1e5, 1e6, 1e7};
    g.y_rules = {{YRule::Kind::log_multiple, 2.0}, {YRule::Kind::log_power, 1.5},
                 {YRule::Kind::log_power, 1.8},    {YRule::Kind::log_power, 2.2},
                 {YRule::Kind::log_power, 3.0},    {YRule::Kind::absolute, 1000.0}};
    return g;
}

inline std::vector<ApproximationReport> scan_reports(const ScanGrid& grid, const PrimeTable& pt,
                                                     const Tolerances& tol = {}) {
    std::vector<ApproximationReport> out;
    const auto cells = grid.cells();
    out.reserve(cells.size());
    for (const auto& c : cells) out.push_back(build_report(c.x, c.y, pt, tol));
    return out;
}

struct PomeranceCell {
    double x = 0.0, y = 0.0;
    bool evaluated = false;
    bool holds = false;
    double margin = 0.0;  // Psi_exact - x rho(u)
    std::string skip_reason;
};

inline std::vector<PomeranceCell> pomerance_scan(const ScanGrid& grid, const PrimeTable& pt,
                                                 const Tolerances& tol = {}) {
    std::vector<PomeranceCell> out;
    for (const auto& cell : grid.cells()) {
        PomeranceCell c;
        c.x = cell.x;
        c.y = cell.y;
        try {
            const std::uint64_t psi = psi_smooth_exact(cell.x, cell.y, pt, tol);
            c.margin = double(psi) - approx_x_rho(cell.x, cell.y);
            c.holds = c.margin >= 0.0;
            c.evaluated = true;
        } catch (const resource_error& e) {
            c.skip_reason = e.what();
        }
        out.push_back(c);
    }
    return out;
}

namespace detail {

// Ei(-2v) - Ei(-v) = int_v^{2v} e^{-r}/r dr; -> log 2 as v -> 0
inline double ei_interval(double v) {
    if (std::abs(v) < 1e-4) {
        double sum = std::log(2.0), mv = 1.0, fact = 1.0, tw = 1.0;
        for (int k = 1; k <= 8; ++k) {
            mv *= -v;
            fact *= k;
            tw *= 2.0;
            sum += mv * (tw - 1.0) / (k * fact);
        }
        return sum;
    }
    return expint_Ei(-2.0 * v) - expint_Ei(-v);
}

}  // namespace detail

inline double constant_L_objective(double v) {
    static const double C = -log_phi_deriv(0, 0.5) - std::log(2.0);  // -log(-zeta(1/2))
    return std::exp(v) * (C - 0.5 * detail::ei_interval(v));
}

// d/dv of the objective; the bracket term differentiates to (e^{-2v}-e^{-v})/v
inline double constant_L_slope(double v) {
    const double w = std::abs(v) < 1e-5 ? -1.0 + 1.5 * v - 7.0 / 6.0 * v * v
                                        : (std::exp(-2.0 * v) - std::exp(-v)) / v;
    return constant_L_objective(v) - 0.5 * std::exp(v) * w;
}

struct ConstantLResult {
    double value = 0.0;
    double argmax = 0.0;
};

inline ConstantLResult constant_L_search(double lo = -10.0, double hi = 10.0) {
    if (!(lo < hi)) throw domain_error("constant_L_search: empty bracket");
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = constant_L_objective(c), fd = constant_L_objective(d);
    while (b - a > 1e-9) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = constant_L_objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = constant_L_objective(d);
        }
    }
    double v = 0.5 * (a + b);
    for (int it = 0; it < 12; ++it) {  // Newton polish of the stationarity condition
        const double h = 1e-6;
        const double s1 = constant_L_slope(v);
        const double s2 = (constant_L_slope(v + h) - constant_L_slope(v - h)) / (2.0 * h);
        if (s2 == 0.0) break;
        const double next = v - s1 / s2;
        if (!(next > lo && next < hi)) break;
        const double step = std::abs(next - v);
        v = next;
        if (step < 1e-14) break;
    }
    return {constant_L_objective(v), v};
}

inline double constant_L() { return constant_L_search().value; }

struct PhaseDiagnostic {
    double x = 0.0, y = 0.0, u = 0.0;
    std::uint64_t psi_exact = 0;
    double D1 = 0.0;         // log(Psi/(x rho Z(sigma) G(sigma,y)))
    double D2 = 0.0;         // log(Psi/(x rho Z(sigma) G(alpha,y)))
    double S = 0.0;          // (log x)^3/(y^2 log y)
    double d1_over_s = 0.0;  // expected negative
    double d2_over_s = 0.0;  // expected positive
    bool in_window = false;  // (1+eps) log x <= y <= (log x)^{2-eps}
};

inline PhaseDiagnostic phase_diagnostic(double x, double y, const PrimeTable& pt,
                                        const Tolerances& tol = {}) {
    const double lx = std::log(x);
    if (!(y > 1.0 + lx)) throw domain_error("phase_diagnostic: need y > 1 + log x");
    PhaseDiagnostic d;
    d.x = x;
    d.y = y;
    d.u = lx / std::log(y);
    d.in_window = y >= 1.05 * lx && y <= std::pow(lx, 1.95);
    const auto ctx = build_context(x, y, pt, tol);
    d.psi_exact = psi_smooth_exact(x, y, pt, tol);
    const double base = std::log(double(d.psi_exact)) - log_x_rho_Z(ctx);
    d.D1 = base - (log_partial_zeta(ctx.sigma, y, pt, 0) - log_F(ctx.sigma, y));
    d.D2 = base - (log_partial_zeta(ctx.alpha, y, pt, 0) - log_F(ctx.alpha, y));
    d.S = lx * lx * lx / (y * y * std::log(y));
    d.d1_over_s = d.D1 / d.S;
    d.d2_over_s = d.D2 / d.S;
    return d;
}

struct IneqReport {
    double x = 0.0, y = 0.0, u = 0.0;
    std::uint64_t psi_exact = 0;
    double lhs = 0.0;          // log(Psi/(x Z(sigma)))
    double log_rho = 0.0;
    double logG2_sigma = 0.0;
    double residual = 0.0;     // lhs - log rho - logG2
    double order_ratio = 0.0;  // logG2(sigma,y) y log y/(log x)^2
};

inline IneqReport ineq_theorem_report(double x, double y, const PrimeTable& pt,
                                      const Tolerances& tol = {}) {
    const double lx = std::log(x);
    if (!(y >= 1.05 * lx)) throw domain_error("ineq_theorem_report: need y >= (1+eps) log x");
    if (!(y <= x / 2.0)) throw domain_error("ineq_theorem_report: need y <= x/2");
    IneqReport r;
    r.x = x;
    r.y = y;
    r.u = lx / std::log(y);
    const auto ctx = build_context(x, y, pt, tol);
    r.psi_exact = psi_smooth_exact(x, y, pt, tol);
    r.lhs = std::log(double(r.psi_exact)) - lx - log_Z(ctx.sigma);
    r.log_rho = std::log(shared_dickman().rho(r.u));
    r.logG2_sigma = logG2_exact(ctx.sigma, y, pt);
    r.residual = r.lhs - r.log_rho - r.logG2_sigma;
    r.order_ratio = r.logG2_sigma * y * std::log(y) / (lx * lx);
    return r;
}

}  // namespace friable
