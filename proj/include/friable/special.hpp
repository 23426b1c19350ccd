#pragma once

// Scalar special functions: xi, I, Ei, the Dickman function rho and its
// Laplace transform, real-axis zeta machinery, Z, and h.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/expint.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "errors.hpp"

namespace friable {

inline constexpr double k_gamma = 0.5772156649015328606;  // Euler-Mascheroni
inline constexpr double k_exp_gamma = 1.7810724179901980;  // e^gamma
inline constexpr double k_log_2pi = 1.8378770664093454836;

namespace detail {

inline void require_finite(double x, const char* who) {
    if (!std::isfinite(x))
        throw domain_error(std::string(who) + ": non-finite argument");
}

} // namespace detail

// ---------------------------------------------------------------------------
// xi(u): the unique nonnegative root of e^xi = 1 + u*xi, u >= 1.

struct XiValue {
    double u = 1.0;
    double xi = 0.0;
    double residual = 0.0;  // |e^xi - 1 - u*xi|
};

inline XiValue xi(double u) {
    detail::require_finite(u, "xi");
    if (u < 1.0) throw domain_error("xi: u must be >= 1");
    if (u == 1.0) return {1.0, 0.0, 0.0};

    double x;
    if (u < 1.25) {
        const double d = u - 1.0;
        x = d * (2.0 + d * (-4.0 / 3.0 + d * (10.0 / 9.0 - d * (136.0 / 135.0))));
        // Newton cannot improve on the series here: both e^x-1-ux and its
        // derivative vanish at u = 1, so double noise in f swamps the root.
        if (d < 1e-5) return {u, x, std::abs(std::exp(x) - 1.0 - u * x)};
    } else {
        x = std::log(u) + std::log(std::log(u + 2.0));
    }
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
        const double ex = std::exp(x);
        const double step = (ex - 1.0 - u * x) / (ex - u);
        x -= step;
        if (!(x > 0.0) || !std::isfinite(x)) break;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) { ok = true; break; }
    }
    if (!ok) {
        // bisection fallback; f < 0 between the trivial root 0 and the target
        double lo = 0.0, hi = 2.0 * std::log(u + 2.0);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (std::exp(mid) - 1.0 - u * mid < 0.0 ? lo : hi) = mid;
        }
        x = 0.5 * (lo + hi);
    }
    return {u, x, std::abs(std::exp(x) - 1.0 - u * x)};
}

// d xi/du = xi / (1 + u(xi - 1)); removable 0/0 at u = 1.
inline double xi_deriv(double u) {
    detail::require_finite(u, "xi_deriv");
    if (u < 1.0) throw domain_error("xi_deriv: u must be >= 1");
    const double d = u - 1.0;
    if (d < 1e-5) return 2.0 + d * (-8.0 / 3.0 + d * (10.0 / 3.0));
    const double x = xi(u).xi;
    return x / (1.0 + u * (x - 1.0));
}

// ---------------------------------------------------------------------------
// I(s) = sum_{k>=1} s^k/(k*k!), entire; equals Ei(s) - gamma - log|s| off 0.

inline double big_I(double s) {
    detail::require_finite(s, "big_I");
    if (s == 0.0) return 0.0;
    if (s < -10.0)  // series would cancel catastrophically
        return boost::math::expint(s) - k_gamma - std::log(-s);
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 400; ++k) {
        term *= s / k;
        const double add = term / k;
        sum += add;
        if (k > 3 && std::abs(add) <= 1e-17 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

inline std::complex<double> big_I(std::complex<double> s) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw domain_error("big_I: non-finite argument");
    if (s == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
    std::complex<double> term = 1.0, sum = 0.0;
    for (int k = 1; k < 500; ++k) {
        term *= s / double(k);
        const std::complex<double> add = term / double(k);
        sum += add;
        if (k > 3 && std::abs(add) <= 1e-17 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

// k-th derivative of I.  I^{(k)}(s) = sum_{i>=0} s^i/(i!(i+k)) near 0, and
// (e^s P_k(s) + (-1)^k (k-1)!)/s^k with P_k(s) = sum_j (-1)^{k-1-j} (k-1)!/j! s^j.
inline double big_I_deriv(int k, double s) {
    if (k < 0 || k > 8) throw domain_error("big_I_deriv: order out of range");
    if (k == 0) return big_I(s);
    detail::require_finite(s, "big_I_deriv");
    if (std::abs(s) < 1.0) {
        double term = 1.0, sum = 1.0 / k;
        for (int i = 1; i < 80; ++i) {
            term *= s / i;
            const double add = term / (i + k);
            sum += add;
            if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    double fact = 1.0;
    for (int j = 2; j < k; ++j) fact *= j;
    double P = 0.0, sj = 1.0, cj = fact;
    for (int j = 0; j < k; ++j) {
        P += (((k - 1 - j) % 2 == 0) ? cj : -cj) * sj;
        sj *= s;
        cj /= (j + 1);
    }
    const double tail = ((k % 2 == 0) ? fact : -fact);
    return (std::exp(s) * P + tail) / std::pow(s, k);
}

// ---------------------------------------------------------------------------
// Principal-value exponential integral Ei.

inline double expint_Ei(double x) {
    detail::require_finite(x, "expint_Ei");
    if (x == 0.0) throw domain_error("expint_Ei: logarithmic singularity at 0");
    return boost::math::expint(x);
}

// ---------------------------------------------------------------------------
// Real-axis zeta machinery built on the alternating eta series.
//
// phi(s) := zeta(s)(s-1) is positive and analytic for s > 0, so everything
// downstream works with log phi and its first four derivatives.  Writing
// w = (s-1) log 2,
//   log phi(s) = log eta(s) - log log 2 + w - log(expm1(w)/w),
//   (log phi)^{(k)}(s) = (log eta)^{(k)}(s) + (log 2)^k V^{(k-1)}(w),
// with V(w) = 1/w - 1/(e^w - 1), which is analytic at w = 0.

namespace detail {

// eta^{(j)}(s) = sum_{m>=1} (-1)^{m-1} (-log m)^j m^{-s} by the
// Cohen-Rodriguez Villegas-Zagier acceleration.
inline double eta_deriv_impl(int j, double s) {
    if (s >= 6.0) {  // plain alternating sum already converges at machine level
        double sum = 0.0;
        for (int m = 1; m <= 2400; ++m) {
            const double lm = std::log(double(m));
            const double a = (j == 0 ? 1.0 : std::pow(-lm, j)) * std::exp(-s * lm);
            sum += (m % 2) ? a : -a;
        }
        return sum;
    }
    constexpr int n = 72;
    double d = std::pow(3.0 + 2.0 * std::sqrt(2.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d, sum = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        const double lm = std::log(double(k + 1));
        const double a = (j == 0 ? 1.0 : std::pow(-lm, j)) * std::exp(-s * lm);
        sum += c * a;
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
    }
    return sum / d;
}

// V(w) = 1/w - 1/(e^w-1) and derivatives up to order 3.
inline double V_deriv(int k, double w) {
    if (std::abs(w) < 0.5) {
        // Bernoulli series coefficients of w^m in V
        static const std::array<std::pair<int, double>, 9> vm = {{
            {0, 0.5},
            {1, -1.0 / 12.0},
            {3, 1.0 / 720.0},
            {5, -1.0 / 30240.0},
            {7, 1.0 / 1209600.0},
            {9, -1.0 / 47900160.0},
            {11, 691.0 / 1307674368000.0},
            {13, -7.0 / 6.0 / 87178291200.0},
            {15, 3617.0 / 510.0 / 20922789888000.0},
        }};
        double sum = 0.0;
        for (const auto& [m, v] : vm) {
            if (m < k) continue;
            double f = 1.0;
            for (int i = 0; i < k; ++i) f *= (m - i);
            sum += v * f * std::pow(w, m - k);
        }
        return sum;
    }
    const double q = 1.0 / std::expm1(w);
    const double q2 = q * q, q3 = q2 * q, q4 = q3 * q, q5 = q4 * q;
    double qk;
    switch (k) {
        case 0: qk = q; break;
        case 1: qk = -(q + q2); break;
        case 2: qk = q + 3 * q2 + 2 * q3; break;
        case 3: qk = -(q + 7 * q2 + 12 * q3 + 6 * q4); break;
        default: qk = q + 15 * q2 + 50 * q3 + 60 * q4 + 24 * q5; break;
    }
    double fk = 1.0;
    for (int i = 2; i <= k; ++i) fk *= i;
    return (k % 2 ? -fk : fk) / std::pow(w, k + 1) - qk;
}

// (log f)^{(k)} from f, f', ..., f^{(kmax)}; fills lf[1..kmax]
inline void log_derivs(const double* f, double* lf, int kmax = 4) {
    const double g1 = f[1] / f[0];
    lf[1] = g1;
    if (kmax < 2) return;
    lf[2] = f[2] / f[0] - g1 * g1;
    if (kmax < 3) return;
    lf[3] = f[3] / f[0] - 3.0 * g1 * lf[2] - g1 * g1 * g1;
    if (kmax < 4) return;
    lf[4] = f[4] / f[0] - 4.0 * g1 * lf[3] - 3.0 * lf[2] * lf[2]
            - 6.0 * g1 * g1 * lf[2] - g1 * g1 * g1 * g1;
    if (kmax < 5) return;
    lf[5] = f[5] / f[0] - 5.0 * g1 * lf[4] - 10.0 * lf[2] * lf[3]
            - 10.0 * g1 * g1 * lf[3] - 15.0 * g1 * lf[2] * lf[2]
            - 10.0 * g1 * g1 * g1 * lf[2] - g1 * g1 * g1 * g1 * g1;
}

} // namespace detail

inline double eta_deriv(int j, double s) {
    if (j < 0 || j > 5) throw domain_error("eta_deriv: order 0..5 supported");
    if (!(s >= 0.0) || !std::isfinite(s))
        throw domain_error("eta_deriv: s >= 0 required");
    return detail::eta_deriv_impl(j, s);
}

// (log phi)^{(k)}(s), phi(s) = zeta(s)(s-1), s >= 0, k = 0..5.
inline double log_phi_deriv(int k, double s) {
    if (k < 0 || k > 5) throw domain_error("log_phi_deriv: order 0..5 supported");
    if (!(s >= 0.0) || !std::isfinite(s))
        throw domain_error("log_phi_deriv: s >= 0 required");
    const double ln2 = std::log(2.0);
    const double w = (s - 1.0) * ln2;
    if (s <= 10.0) {
        double e[6];
        for (int j = 0; j <= k; ++j) e[j] = eta_deriv(j, s);
        if (k == 0) {
            const double t = std::abs(w) < 1e-5
                                 ? w / 2.0 + w * w / 24.0
                                 : std::log(std::expm1(w) / w);
            return std::log(e[0]) + w - t - std::log(ln2);
        }
        double le[6];
        detail::log_derivs(e, le, k);
        return le[k] + std::pow(ln2, k) * detail::V_deriv(k - 1, w);
    }
    // direct Dirichlet sums; no pole cancellation issues this far right
    double z[6] = {0, 0, 0, 0, 0, 0};
    for (int n = 1; n <= 256; ++n) {
        const double ln = std::log(double(n));
        const double b = std::exp(-s * ln);
        double p = 1.0;
        for (int j = 0; j <= 5; ++j) {
            z[j] += p * b;
            p *= -ln;
        }
    }
    if (k == 0) return std::log(z[0]) + std::log(s - 1.0);
    double lz[6];
    detail::log_derivs(z, lz, k);
    double pole = 1.0;  // d^k/ds^k log(s-1) = (-1)^{k-1} (k-1)!/(s-1)^k
    for (int i = 2; i < k; ++i) pole *= i;
    pole *= (k % 2 ? 1.0 : -1.0) / std::pow(s - 1.0, k);
    return lz[k] + pole;
}

inline double zeta_real(double s) {
    if (!(s > 0.0) || s == 1.0 || !std::isfinite(s))
        throw domain_error("zeta_real: need s > 0, s != 1");
    return std::exp(log_phi_deriv(0, s)) / (s - 1.0);
}

// (zeta'/zeta)(s) for s > 0, s != 1
inline double zeta_logderiv(double s) {
    if (s == 1.0) throw domain_error("zeta_logderiv: pole at s = 1");
    return log_phi_deriv(1, s) - 1.0 / (s - 1.0);
}

// C_sigma = d/ds log(zeta(s)(s-1))
inline double C_sigma(double s) { return log_phi_deriv(1, s); }

// Z(t) = zeta(t)(t-1)/t on (0,1], Z(1) = 1
inline double Z_fn(double t) {
    if (!(t > 0.0) || t > 1.0) throw domain_error("Z_fn: t in (0,1] required");
    if (t == 1.0) return 1.0;
    return std::exp(log_phi_deriv(0, t)) / t;
}

inline double h_fn(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw domain_error("h_fn: t > 0 required");
    return std::log(t) / (std::sqrt(1.0 + 1.0 / t) * std::log1p(t));
}

// ---------------------------------------------------------------------------
// Dickman rho.
//
// Each unit interval [n, n+1] carries the Taylor expansion of rho about its
// midpoint; the delay equation turns the expansion on [n-1, n] into the one
// on [n, n+1] (division by t and termwise integration).  The nearest
// singularity of the continuation is 3/2 away, so coefficients decay like
// 3^{-k} and a short double tail suffices for evaluation.  The recursion
// itself must run in extended precision: the delay equation damps generic
// perturbations only like ~1/t^2 while rho itself collapses like u^{-u}, so
// any noise injected near t = 2 dominates rho(u) long before u = 50.  In
// plain doubles the computed values bottom out near 1e-18 (measured), i.e.
// rho(20) would already be wrong by eleven orders of magnitude.

class DickmanSolver {
  public:
    explicit DickmanSolver(double max_u = 64.0, double grid_step = 1e-3)
        : max_u_(max_u), grid_step_(grid_step) {
        detail::require_finite(max_u, "DickmanSolver");
        if (!(max_u >= 2.0)) throw domain_error("DickmanSolver: max_u >= 2 required");
        if (max_u > 125.0)
            throw domain_error("DickmanSolver: rho(u) underflows double past u ~ 125");
        if (!(grid_step > 0.0) || grid_step > 0.5)
            throw domain_error("DickmanSolver: grid_step in (0, 0.5] required");
        const int last = std::max(2, int(std::ceil(max_u_)));
        if (max_u_ <= 66.0)
            build<boost::multiprecision::number<
                boost::multiprecision::cpp_bin_float<170>>>(last, 360);
        else
            build<boost::multiprecision::number<
                boost::multiprecision::cpp_bin_float<370>>>(last, 790);
        const std::size_t samples = std::size_t(max_u_ / grid_step_) + 1;
        history_.reserve(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            const double t = std::min(double(i) * grid_step_, max_u_);
            history_.emplace_back(t, rho(t));
        }
    }

    double rho(double t) const {
        if (!std::isfinite(t) || t < 0.0 || t > max_u_)
            throw domain_error("rho: t outside [0, max_u]");
        if (t <= 1.0) return 1.0;
        if (t <= 2.0) return 1.0 - std::log(t);
        int n = int(std::floor(t));
        if (double(n) == t) --n;  // integer t: evaluate the left piece at z = 1/2
        n = std::min(n, int(pieces_.size()));
        const double z = t - (double(n) + 0.5);
        const auto& c = pieces_[n - 1];
        double v = 0.0;
        for (int k = k_store - 1; k >= 0; --k) v = v * z + c[k];
        return v;
    }

    double max_u() const { return max_u_; }
    double grid_step() const { return grid_step_; }
    const std::vector<std::pair<double, double>>& history() const { return history_; }

  private:
    static constexpr int k_store = 44;

    template <class Big>
    void build(int last, int terms) {
        std::vector<Big> c(terms), d(terms), D(terms), kinv(terms);
        for (int k = 1; k < terms; ++k) kinv[k] = Big(1) / k;
        {
            const Big m = Big(3) / 2;
            const Big minv = Big(2) / 3;
            c[0] = 1 - log(m);
            Big mp = 1;
            for (int k = 1; k < terms; ++k) {
                mp *= minv;
                c[k] = Big((k % 2) ? -1 : 1) * kinv[k] * mp;
            }
        }
        pieces_.resize(std::size_t(last) - 1);
        store(1, c);
        const Big half = Big(1) / 2;
        for (int n = 2; n < last; ++n) {
            const Big minv = Big(2) / (2 * n + 1);
            d[0] = c[0] * minv;
            for (int k = 1; k < terms; ++k) d[k] = (c[k] - d[k - 1]) * minv;
            D[0] = 0;
            for (int k = 1; k < terms; ++k) D[k] = d[k - 1] * kinv[k];
            Big vp = 0, vD = 0;
            for (int k = terms - 1; k >= 0; --k) vp = vp * half + c[k];
            for (int k = terms - 1; k >= 0; --k) vD = vD * (-half) + D[k];
            c[0] = vp + vD;
            for (int k = 1; k < terms; ++k) c[k] = -D[k];
            store(n, c);
        }
    }

    template <class Big>
    void store(int n, const std::vector<Big>& c) {
        auto& p = pieces_[n - 1];
        for (int k = 0; k < k_store; ++k) p[k] = double(c[k]);
    }

    double max_u_, grid_step_;
    std::vector<std::array<double, k_store>> pieces_;  // pieces_[i]: [i+1, i+2]
    std::vector<std::pair<double, double>> history_;
};

// rho_hat(s) = exp(gamma + I(-s)), the Laplace transform of rho
inline double rho_hat(double s) {
    detail::require_finite(s, "rho_hat");
    return std::exp(k_gamma + big_I(-s));
}

inline std::complex<double> rho_hat(std::complex<double> s) {
    return std::exp(k_gamma + big_I(-s));
}

} // namespace friable
