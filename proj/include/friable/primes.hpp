#pragma once

// Prime generation, von Mangoldt sums, Chebyshev psi, and the exact
// friable-count oracles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "special.hpp"

namespace friable {

struct PrimeTable {
    std::uint64_t limit = 0;
    std::vector<std::uint32_t> primes;
    std::vector<double> logs;
};

inline PrimeTable build_prime_table(std::uint64_t limit, const Tolerances& tol = {}) {
    if (limit < 2 || limit > tol.sieve_limit_cap)
        throw resource_error("build_prime_table: limit outside [2, " +
                             std::to_string(tol.sieve_limit_cap) + "]");
    PrimeTable t;
    t.limit = limit;
    // odd-only sieve; index i represents 2i+1
    const std::uint64_t half = (limit - 1) / 2;
    std::vector<bool> comp(half + 1, false);
    for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
        if (comp[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) comp[j] = true;
    }
    t.primes.push_back(2);
    for (std::uint64_t i = 1; i <= half; ++i)
        if (!comp[i]) t.primes.push_back(std::uint32_t(2 * i + 1));
    t.logs.reserve(t.primes.size());
    for (const auto p : t.primes) t.logs.push_back(std::log(double(p)));
    return t;
}

namespace detail {

// floor of a nonnegative real that is known to fit in a u64
inline std::uint64_t floor_u64(double x) {
    return std::uint64_t(std::floor(x));
}

// smallest prime p with n = p^k, or 0 when n is not a prime power (n >= 2)
inline std::uint64_t prime_power_base(std::uint64_t n, const PrimeTable& table) {
    if (n < 2) return 0;
    for (std::size_t i = 0; i < table.primes.size(); ++i) {
        const std::uint64_t p = table.primes[i];
        if (p * p > n) break;
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            return n == 1 ? p : 0;
        }
    }
    return n;  // prime (no divisor up to sqrt(n))
}

// sum over prime powers p^k <= x of log p * (p^k)^{-s} (divided by log p^k
// when over_log), with a configurable weight on the term at p^k = x itself.
template <class Scalar>
Scalar von_mangoldt_sum(double x, Scalar s, const PrimeTable& table,
                        bool over_log, double endpoint_weight) {
    const std::uint64_t xf = floor_u64(x);
    const bool weigh_endpoint = (double(xf) == x);
    Scalar sum = 0;
    for (std::size_t i = 0; i < table.primes.size(); ++i) {
        const std::uint64_t p = table.primes[i];
        if (p > xf) break;
        const double lp = table.logs[i];
        double lpk = lp;
        for (std::uint64_t pk = p;; pk *= p, lpk += lp) {
            Scalar term = lp * std::exp(-s * lpk);
            if (over_log) term /= lpk;
            if (weigh_endpoint && pk == xf) term *= endpoint_weight;
            sum += term;
            if (pk > xf / p) break;  // next power would pass x (overflow-safe)
        }
    }
    return sum;
}

} // namespace detail

// Chebyshev psi(y) = sum_{p^k <= y} log p
inline double chebyshev_psi(double y, const PrimeTable& table) {
    detail::require_finite(y, "chebyshev_psi");
    if (y < 1.0) throw domain_error("chebyshev_psi: y >= 1 required");
    if (y > double(table.limit)) throw domain_error("chebyshev_psi: y beyond table limit");
    if (y < 2.0) return 0.0;
    return detail::von_mangoldt_sum<double>(y, 0.0, table, false, 1.0);
}

// quick Psi(x,y) size estimate via the saddle form of rho (guards budgets)
inline double psi_smooth_estimate(double x, double y) {
    if (y >= x) return x;
    const double u = std::log(x) / std::log(y);
    const double xv = xi(u).xi;
    return x * std::sqrt(xi_deriv(u) / (2.0 * M_PI)) *
           std::exp(k_gamma - u * xv + big_I(xv));
}

namespace detail {

struct EnumState {
    const PrimeTable* table;
    std::uint64_t nodes = 0;
    std::uint64_t budget = 0;
};

// count of integers <= cap whose prime factors all lie among primes[0..idx]
inline std::uint64_t enum_count(std::size_t idx, std::uint64_t cap, EnumState& st) {
    if (++st.nodes > st.budget)
        throw resource_error("psi_smooth_exact: enumeration node budget exceeded");
    const std::uint64_t p = st.table->primes[idx];
    if (idx == 0) {  // powers of the remaining prime (including p^0 = 1)
        std::uint64_t c = 1, pk = p;
        while (pk <= cap) {
            ++c;
            if (pk > cap / p) break;
            pk *= p;
        }
        return c;
    }
    std::uint64_t total = 0;
    for (std::uint64_t rest = cap;; rest /= p) {
        total += enum_count(idx - 1, rest, st);
        if (rest < p) break;
    }
    return total;
}

} // namespace detail

// exact Psi(x,y) by depth-first enumeration over exponent vectors
inline std::uint64_t psi_smooth_exact(double x, double y, const PrimeTable& table,
                                      const Tolerances& tol = {}) {
    detail::require_finite(x, "psi_smooth_exact");
    detail::require_finite(y, "psi_smooth_exact");
    if (x < 1.0) throw domain_error("psi_smooth_exact: x >= 1 required");
    if (y < 2.0) throw domain_error("psi_smooth_exact: y >= 2 required");
    if (y > double(table.limit))
        throw domain_error("psi_smooth_exact: y beyond table limit");
    const double estimate = psi_smooth_estimate(x, y);
    if (estimate > double(tol.psi_exact_budget))
        throw resource_error("psi_smooth_exact: estimated count " +
                             std::to_string(estimate) + " exceeds budget " +
                             std::to_string(tol.psi_exact_budget));
    const std::uint64_t xf = detail::floor_u64(x);
    if (xf == 0) return 0;
    const double ycap = std::min(y, x);
    std::size_t np = 0;
    while (np < table.primes.size() && double(table.primes[np]) <= ycap) ++np;
    if (np == 0) return 1;  // only n = 1
    detail::EnumState st{&table, 0, tol.enum_node_budget};
    return detail::enum_count(np - 1, xf, st);
}

// independent exact count: largest-prime-factor sieve on [1, floor(x)]
inline std::vector<std::uint32_t> lpf_sieve(std::uint64_t n) {
    if (n < 1) throw domain_error("lpf_sieve: n >= 1 required");
    if (n > 200000000ULL)
        throw resource_error("lpf_sieve: table of " + std::to_string(n) +
                             " entries will not fit the memory budget");
    std::vector<std::uint32_t> lpf(n + 1, 1);
    for (std::uint64_t p = 2; p <= n; ++p)
        if (lpf[p] == 1)  // p prime: overwrite ascending leaves the largest
            for (std::uint64_t m = p; m <= n; m += p) lpf[m] = std::uint32_t(p);
    return lpf;
}

inline std::uint64_t psi_smooth_sieve(double x, double y, const Tolerances& tol = {}) {
    detail::require_finite(x, "psi_smooth_sieve");
    detail::require_finite(y, "psi_smooth_sieve");
    if (x < 1.0) throw domain_error("psi_smooth_sieve: x >= 1 required");
    if (y < 2.0) throw domain_error("psi_smooth_sieve: y >= 2 required");
    const double estimate = psi_smooth_estimate(x, y);
    if (estimate > double(tol.psi_exact_budget))
        throw resource_error("psi_smooth_sieve: estimated count " +
                             std::to_string(estimate) + " exceeds budget");
    const std::uint64_t xf = detail::floor_u64(x);
    const auto lpf = lpf_sieve(xf);
    const std::uint64_t yf = y >= double(xf) ? xf : detail::floor_u64(y);
    std::uint64_t count = 0;
    for (std::uint64_t m = 1; m <= xf; ++m)
        if (lpf[m] <= yf) ++count;
    return count;
}

// S1(x,s) = sum'_{n<=x} Lambda(n)/n^s, endpoint halved at a prime power
inline std::complex<double> S1_direct(double x, std::complex<double> s,
                                      const PrimeTable& table) {
    detail::require_finite(x, "S1_direct");
    if (x < 2.0) throw domain_error("S1_direct: x >= 2 required");
    if (x > double(table.limit)) throw domain_error("S1_direct: x beyond table limit");
    if (s.real() < 0.0) throw domain_error("S1_direct: Re s >= 0 required");
    const std::uint64_t xf = detail::floor_u64(x);
    const double w =
        (double(xf) == x && detail::prime_power_base(xf, table) != 0) ? 0.5 : 1.0;
    return detail::von_mangoldt_sum<std::complex<double>>(x, s, table, false, w);
}

inline double S1_direct(double x, double s, const PrimeTable& table) {
    return S1_direct(x, std::complex<double>(s, 0.0), table).real();
}

// S2(x,s) = sum'_{n<=x} Lambda(n)/(n^s log n)
inline double S2_direct(double x, double s, const PrimeTable& table) {
    detail::require_finite(x, "S2_direct");
    detail::require_finite(s, "S2_direct");
    if (x < 2.0) throw domain_error("S2_direct: x >= 2 required");
    if (x > double(table.limit)) throw domain_error("S2_direct: x beyond table limit");
    if (s < 0.0 || s > 1.0) throw domain_error("S2_direct: s in [0,1] required");
    const std::uint64_t xf = detail::floor_u64(x);
    const double w =
        (double(xf) == x && detail::prime_power_base(xf, table) != 0) ? 0.5 : 1.0;
    return detail::von_mangoldt_sum<double>(x, s, table, true, w);
}

} // namespace friable
