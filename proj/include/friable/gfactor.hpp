#pragma once

// The correction factor G(s,y) = zeta(s,y)/F(s,y) and its split G = G1 G2:
//   log G2(s,y) = sum_{k>=2} sum_{y^{1/k} < p <= y} p^{-ks}/k   (prime powers above y)
//   log G1(s,y) = sum_{n<=y} Lambda(n)/(n^s log n) - log F(s,y)
// with F(s,y) = zeta(s)(s-1) log y e^gamma e^{I((1-s)log y)}.

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <friable/config.hpp>
#include <friable/errors.hpp>
#include <friable/primes.hpp>
#include <friable/saddle.hpp>
#include <friable/special.hpp>
#include <friable/zeros.hpp>

namespace friable {

inline double log_F(double s, double y) {
    const double ly = std::log(y);
    return log_phi_deriv(0, s) + std::log(ly) + k_gamma + big_I((1.0 - s) * ly);
}

namespace detail {

// smallest k with p^k > floor(y); at least 2 whenever p <= y
inline int first_power_above(std::uint64_t p, std::uint64_t fy) {
    int m = 1;
    std::uint64_t pk = p;
    while (pk <= fy) {
        pk *= p;  // fy <= 1e9 and pk <= fy before the multiply, so no overflow
        ++m;
    }
    return m;
}

// sum_{k>=m} k^{d-1} t^k for d = 0..5, 0 < t < 1; d = 0 means sum t^k/k.
// Series when t is small; closed form (polylog minus partial sum) when the
// direct series would run long.
inline double power_tail(double t, int m, int d) {
    if (t < 0.9) {
        double total = 0.0;
        double tk = std::pow(t, m);
        for (int k = m;; ++k) {
            double w;
            switch (d) {
                case 0: w = 1.0 / k; break;
                case 1: w = 1.0; break;
                default: {
                    w = k;
                    for (int i = 2; i < d; ++i) w *= k;
                    break;
                }
            }
            const double term = w * tk;
            total += term;
            tk *= t;
            if (term < 1e-19 * (1.0 + total)) break;
        }
        return total;
    }
    const double om = 1.0 - t;
    double full;
    switch (d) {
        case 0: full = -std::log1p(-t); break;
        case 1: full = t / om; break;
        case 2: full = t / (om * om); break;
        case 3: full = t * (1.0 + t) / (om * om * om); break;
        case 4: full = t * (1.0 + t * (4.0 + t)) / (om * om * om * om); break;
        default: full = t * (1.0 + t * (11.0 + t * (11.0 + t))) / (om * om * om * om * om); break;
    }
    double partial = 0.0, tk = t;
    for (int k = 1; k < m; ++k) {
        double w;
        switch (d) {
            case 0: w = 1.0 / k; break;
            case 1: w = 1.0; break;
            default: {
                w = k;
                for (int i = 2; i < d; ++i) w *= k;
                break;
            }
        }
        partial += w * tk;
        tk *= t;
    }
    return full - partial;
}

inline void check_g2_guard(double s, double y) {
    if (!(s >= 0.01 / std::log(y)))
        throw domain_error("logG2: s = " + std::to_string(s) +
                           " below the divergence guard 0.01/log y");
}

}  // namespace detail

// Exact log G2: each prime p <= y contributes its powers beyond y in full,
// via the analytic tail sum_{k>=m} p^{-ks}/k (no k-cap: every k >= m with
// y^{1/k} < p has a term, and for k > log y/log 2 that means every prime).
inline double logG2_exact(double s, double y, const PrimeTable& table) {
    if (!(y >= 2.0)) throw domain_error("logG2_exact: need y >= 2");
    if (!(y <= static_cast<double>(table.limit)))
        throw domain_error("logG2_exact: y exceeds prime table limit");
    detail::check_g2_guard(s, y);
    const std::uint64_t fy = detail::floor_u64(y);
    double total = 0.0;
    for (std::size_t i = 0; i < table.primes.size(); ++i) {
        const std::uint64_t p = table.primes[i];
        if (static_cast<double>(p) > y) break;
        const int m = detail::first_power_above(p, fy);
        const double t = std::exp(-s * table.logs[i]);
        total += detail::power_tail(t, m, 0);
    }
    return total;
}

// Main-term approximation (1/2) int_{sqrt y}^{y} t^{-2s}/log t dt
//   = (Ei((1-2s)log y) - Ei(((1-2s)/2) log y))/2,
// with the combined series Ei(a)-Ei(a/2) = log 2 + sum a^k (1-2^{-k})/(k k!)
// taking over near s = 1/2.
inline double logG2_main(double s, double y) {
    if (!(s > 0.0 && s <= 1.0)) throw domain_error("logG2_main: need s in (0,1]");
    const double a = (1.0 - 2.0 * s) * std::log(y);
    if (std::abs(a) < 1e-4) {
        double sum = std::log(2.0);
        double ak = 1.0, fact = 1.0, half = 1.0;
        for (int k = 1; k <= 6; ++k) {
            ak *= a;
            fact *= k;
            half *= 0.5;
            sum += ak * (1.0 - half) / (k * fact);
        }
        return 0.5 * sum;
    }
    return 0.5 * (expint_Ei(a) - expint_Ei(0.5 * a));
}

// Exact log G1 = sum_{n<=y} Lambda(n)/(n^s log n) - log F(s,y); the sum takes
// full weight at n = y even when y is a prime power (the G1 definition has no
// primed halving).
inline double logG1_exact(double s, double y, const PrimeTable& table) {
    if (!(s > 0.0 && s <= 1.0)) throw domain_error("logG1_exact: need s in (0,1]");
    if (!(y >= 4.0)) throw domain_error("logG1_exact: need y >= 4");
    if (!(y <= static_cast<double>(table.limit)))
        throw domain_error("logG1_exact: y exceeds prime table limit");
    const double sum =
        detail::von_mangoldt_sum<double>(y, s, table, /*over_log=*/true, /*endpoint_weight=*/1.0);
    return sum - log_F(s, y);
}

struct LogG1Zeros {
    double value = 0.0;
    double error_bound = 0.0;
};

// Zero-driven log G1: endpoint indicator + (- sum over zeros of the integrals)
// + trivial-zero integrals; the truncation remainder is the reported bound.
inline LogG1Zeros logG1_zeros(double s, double y, double T, const ZeroTable& zt,
                              const PrimeTable& pt) {
    if (!(s >= 0.0 && s <= 1.0)) throw domain_error("logG1_zeros: need s in [0,1]");
    if (!(y >= 4.0)) throw domain_error("logG1_zeros: need y >= 4");
    if (!(T >= 2.0)) throw domain_error("logG1_zeros: need T >= 2");
    if (zt.count() == 0 || zt.max_ordinate() < T)
        throw coverage_error("logG1_zeros: zero table does not cover T = " + std::to_string(T));

    double endpoint = 0.0;
    const std::uint64_t fy = detail::floor_u64(y);
    if (static_cast<double>(fy) == y) {
        const std::uint64_t base = detail::prime_power_base(fy, pt);
        if (base != 0)
            endpoint = std::log(static_cast<double>(base)) /
                       (2.0 * std::pow(y, s) * std::log(y));
    }
    long double zsum = 0.0L;
    for (double g : zt.ordinates) {
        if (g > T) break;
        zsum += 2.0L * std::real(zero_integral_quad(y, s, g));
    }
    LogG1Zeros r;
    r.value = endpoint - static_cast<double>(zsum) + detail::trivial_zero_integral_sum(y, s);
    r.error_bound = R2_bound(y, T, s, pt);
    return r;
}

// RH-shaped formula: (1/2) int_{sqrt y}^y t^{-2 sigma}/log t dt
//                  + (psi(y) - y)/(y^sigma log y).
inline double logG_rh_formula(double sigma, double y, const PrimeTable& pt) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw domain_error("logG_rh_formula: need sigma in (0,1)");
    const double psidev = chebyshev_psi(y, pt) - y;
    return logG2_main(sigma, y) + psidev / (std::pow(y, sigma) * std::log(y));
}

// Scale of the formula's unaccounted remainder, O(y^{1/2-sigma}/log y).
inline double logG_rh_remainder_scale(double sigma, double y) {
    return std::pow(y, 0.5 - sigma) / std::log(y);
}

enum class GPart { G1, G2 };

namespace detail {

// sum over prime powers p^k <= y of (log p)(k log p)^pw p^{-ks}, full endpoint
inline double lambda_power_sum(double y, double s, int pw, const PrimeTable& table) {
    const std::uint64_t fy = floor_u64(y);
    long double total = 0.0L;
    for (std::size_t i = 0; i < table.primes.size(); ++i) {
        const std::uint64_t p = table.primes[i];
        if (p > fy) break;
        const double L = table.logs[i];
        std::uint64_t pk = p;
        for (int k = 1;; ++k) {
            const double kl = k * L;
            double w = L;
            for (int j = 0; j < pw; ++j) w *= kl;
            total += w * std::exp(-s * kl);
            if (pk > fy / p) break;
            pk *= p;
        }
    }
    return static_cast<double>(total);
}

}  // namespace detail

// i-th derivative of the log-derivative: returns (log G_part)^{(i+1)}(s),
// i = 0..4, by exact term-wise differentiation.
inline double G_logderiv(double s, double y, int i, GPart part, const PrimeTable& table) {
    if (i < 0 || i > 4) throw domain_error("G_logderiv: order 0..4 supported");
    const int d = i + 1;
    if (!(y <= static_cast<double>(table.limit)))
        throw domain_error("G_logderiv: y exceeds prime table limit");
    if (part == GPart::G2) {
        if (!(y >= 2.0)) throw domain_error("G_logderiv: need y >= 2");
        detail::check_g2_guard(s, y);
        const std::uint64_t fy = detail::floor_u64(y);
        double total = 0.0;
        for (std::size_t i2 = 0; i2 < table.primes.size(); ++i2) {
            const std::uint64_t p = table.primes[i2];
            if (static_cast<double>(p) > y) break;
            const double L = table.logs[i2];
            const int m = detail::first_power_above(p, fy);
            const double t = std::exp(-s * L);
            double lp = d % 2 ? -L : L;
            for (int j = 1; j < d; ++j) lp *= L;
            total += lp * detail::power_tail(t, m, d);
        }
        return total;
    }
    if (!(s > 0.0 && s <= 1.0)) throw domain_error("G_logderiv: need s in (0,1] for G1");
    if (!(y >= 4.0)) throw domain_error("G_logderiv: need y >= 4");
    const double ly = std::log(y);
    const double sign = d % 2 ? -1.0 : 1.0;
    const double lam = sign * detail::lambda_power_sum(y, s, d - 1, table);
    double pw = 1.0;
    for (int j = 0; j < d; ++j) pw *= -ly;
    const double logF_d = log_phi_deriv(d, s) + pw * big_I_deriv(d, (1.0 - s) * ly);
    return lam - logF_d;
}

// Low-s main term: int_{sqrt y}^{y} (-log(1 - t^{-s}) - t^{-s}) dt/log t,
// under t = e^w to tame the endpoints.
inline double logg2_low_s(double s, double y, const PrimeTable& table, int max_depth = 15) {
    (void)table;
    if (!(y >= 4.0)) throw domain_error("logg2_low_s: need y >= 4");
    const double ly = std::log(y);
    if (!(s >= 0.01 / ly && s <= 0.1))
        throw domain_error("logg2_low_s: s outside the low-s branch [0.01/log y, 0.1]");
    auto f = [&](double w) {
        const double ts = std::exp(-s * w);
        return (-std::log1p(-ts) - ts) * std::exp(w) / w;
    };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.5 * ly, ly,
                                                                         max_depth, 1e-10);
}

struct GFactorBreakdown {
    double s = 0.0;
    double y = 0.0;
    double logG1_exact = 0.0;
    double logG1_zeros = 0.0;
    double logG1_zeros_error = 0.0;
    double logG2_exact = 0.0;
    double logG2_main = 0.0;
    double logG_total = 0.0;  // log zeta(s,y) - log F(s,y), computed independently
    double logG_rh_formula = 0.0;
    bool has_zeros = false;
    bool has_rh = false;
};

inline GFactorBreakdown g_breakdown(double s, double y, const PrimeTable& pt,
                                    const ZeroTable* zt = nullptr, double T = 0.0,
                                    bool want_rh = false) {
    GFactorBreakdown b;
    b.s = s;
    b.y = y;
    b.logG1_exact = friable::logG1_exact(s, y, pt);
    b.logG2_exact = friable::logG2_exact(s, y, pt);
    b.logG2_main = friable::logG2_main(s, y);
    b.logG_total = log_partial_zeta(s, y, pt, 0) - log_F(s, y);
    if (zt != nullptr) {
        const auto z = friable::logG1_zeros(s, y, T, *zt, pt);
        b.logG1_zeros = z.value;
        b.logG1_zeros_error = z.error_bound;
        b.has_zeros = true;
    }
    if (want_rh) {
        b.logG_rh_formula = friable::logG_rh_formula(s, y, pt);
        b.has_rh = true;
    }
    return b;
}

}  // namespace friable
