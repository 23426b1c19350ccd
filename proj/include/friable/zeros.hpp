#pragma once

// Riemann zeta zero table ingestion and validation, plus the truncated
// explicit formulas S1, S2 and psi(y) - y driven by the zeros. All zeros are
// taken on the critical line, rho = 1/2 + i gamma.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <istream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>

#include <friable/config.hpp>
#include <friable/errors.hpp>
#include <friable/primes.hpp>
#include <friable/special.hpp>

namespace friable {

struct ZeroTable {
    std::vector<double> ordinates;  // ascending positive imaginary parts
    double precision = 1e-6;        // guaranteed absolute accuracy per ordinate

    std::size_t count() const { return ordinates.size(); }
    double max_ordinate() const { return ordinates.empty() ? 0.0 : ordinates.back(); }
};

// First 100 ordinates, enough for T up to ~236.
inline const std::array<double, 100>& bundled_zero_ordinates() {
    static const std::array<double, 100> zs = {{
        14.134725141735, 21.022039638772, 25.010857580146, 30.424876125860,
        32.935061587739, 37.586178158826, 40.918719012147, 43.327073280915,
        48.005150881167, 49.773832477672, 52.970321477714, 56.446247697063,
        59.347044002602, 60.831778524610, 65.112544048082, 67.079810529494,
        69.546401711174, 72.067157674482, 75.704690699084, 77.144840068875,
        79.337375020249, 82.910380854086, 84.735492980517, 87.425274613125,
        88.809111207634, 92.491899270558, 94.651344040520, 95.870634228245,
        98.831194218194, 101.31785100573, 103.72553804048, 105.44662305233,
        107.16861118428, 111.02953554317, 111.87465917699, 114.32022091545,
        116.22668032086, 118.79078286598, 121.37012500242, 122.94682929355,
        124.25681855435, 127.51668387960, 129.57870419996, 131.08768853093,
        133.49773720300, 134.75650975337, 138.11604205453, 139.73620895212,
        141.12370740402, 143.11184580762, 146.00098248677, 147.42276534256,
        150.05352042078, 150.92525761224, 153.02469381120, 156.11290929424,
        157.59759181759, 158.84998817142, 161.18896413760, 163.03070968718,
        165.53706918790, 167.18443997817, 169.09451541557, 169.91197647941,
        173.41153651959, 174.75419152337, 176.44143429771, 178.37740777610,
        179.91648402026, 182.20707848437, 184.87446784839, 185.59878367771,
        187.22892258350, 189.41615865602, 192.02665636071, 193.07972660385,
        195.26539667953, 196.87648184096, 198.01530967625, 201.26475194370,
        202.49359451414, 204.18967180310, 205.39469720216, 207.90625888781,
        209.57650971686, 211.69086259537, 213.34791935971, 214.54704478349,
        216.16953850826, 219.06759634902, 220.71491883931, 221.43070555469,
        224.00700025460, 224.98332466958, 227.42144427968, 229.33741330553,
        231.25018870050, 231.98723525318, 233.69340417891, 236.52422966582,
    }};
    return zs;
}

inline ZeroTable bundled_zeros() {
    ZeroTable t;
    t.ordinates.assign(bundled_zero_ordinates().begin(), bundled_zero_ordinates().end());
    t.precision = 1e-9;
    return t;
}

// Text format: one positive decimal ordinate per line, strictly ascending;
// '#' lines and blank lines are ignored.
inline ZeroTable load_zeros(std::istream& source, double precision = 1e-6) {
    ZeroTable t;
    t.precision = precision;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(source, line)) {
        ++lineno;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const char* begin = line.c_str() + b;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin)
            throw format_error("load_zeros: unparsable ordinate at line " + std::to_string(lineno));
        while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
        if (*end != '\0')
            throw format_error("load_zeros: trailing garbage at line " + std::to_string(lineno));
        if (!(v > 14.0))
            throw format_error("load_zeros: ordinate " + std::to_string(v) +
                               " at line " + std::to_string(lineno) +
                               " below the first zero (14.13...)");
        if (!t.ordinates.empty() && !(v > t.ordinates.back()))
            throw format_error("load_zeros: ordinates must be strictly ascending (line " +
                               std::to_string(lineno) + ")");
        t.ordinates.push_back(v);
    }
    return t;
}

namespace detail {

// Riemann-Siegel theta with two correction terms; accurate to ~1e-9 for t >= 10.
inline double riemann_siegel_theta(double t) {
    const double pi = 3.14159265358979323846;
    return 0.5 * t * std::log(t / (2.0 * pi)) - 0.5 * t - pi / 8.0 +
           1.0 / (48.0 * t) + 7.0 / (5760.0 * t * t * t);
}

// Euler-Maclaurin evaluation of zeta(1/2 + it).
inline std::complex<double> zeta_half_line(double t) {
    const std::complex<double> s(0.5, t);
    const int N = std::max(10, static_cast<int>(std::ceil(1.3 * t)));
    std::complex<double> sum = 0.0;
    for (int n = 1; n < N; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
    const double Nd = static_cast<double>(N);
    const std::complex<double> Nms = std::exp(-s * std::log(Nd));  // N^{-s}
    sum += 0.5 * Nms;
    sum += Nms * Nd / (s - 1.0);  // N^{1-s}/(s-1)
    // B_{2k}/(2k)! (s)(s+1)...(s+2k-2) N^{-s-2k+1}
    static const double coeff[8] = {
        1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0,
        1.0 / 47900160.0, -691.0 / 1307674368000.0, 1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    };
    std::complex<double> poch = s;        // rising factorial with 2k-1 factors
    std::complex<double> npow = Nms / Nd; // N^{-s-2k+1}
    for (int k = 1; k <= 8; ++k) {
        sum += coeff[k - 1] * poch * npow;
        poch *= (s + (2.0 * k - 1.0)) * (s + (2.0 * k));
        npow /= Nd * Nd;
    }
    return sum;
}

}  // namespace detail

// Hardy's real-valued Z(t) = e^{i theta(t)} zeta(1/2 + it).
inline double hardy_z(double t, const Tolerances& tol = Tolerances{}) {
    if (!(t >= 1.0)) throw domain_error("hardy_z: need t >= 1");
    if (t > tol.hardy_gamma_budget)
        throw resource_error("hardy_z: t = " + std::to_string(t) +
                             " exceeds the Euler-Maclaurin budget " +
                             std::to_string(tol.hardy_gamma_budget));
    const std::complex<double> rot(0.0, detail::riemann_siegel_theta(t));
    return std::real(std::exp(rot) * detail::zeta_half_line(t));
}

// True iff Z changes sign within +- width of gamma.
inline bool validate_zero(double gamma, double width, const Tolerances& tol = Tolerances{}) {
    if (!(gamma > 0.0) || !(width > 0.0)) throw domain_error("validate_zero: need gamma, width > 0");
    if (gamma > tol.hardy_gamma_budget)
        throw resource_error("validate_zero: gamma exceeds the Euler-Maclaurin budget");
    return hardy_z(gamma - width, tol) * hardy_z(gamma + width, tol) < 0.0;
}

namespace detail {

// <x>: distance from x to the nearest prime power != x.
inline double nearest_prime_power_gap(double x, const PrimeTable& pt) {
    const std::uint64_t fx = floor_u64(x);
    double best = x;  // any prime power is closer than this for x >= 4
    for (std::uint64_t n = fx; n >= 2; --n) {
        if (static_cast<double>(n) == x) continue;
        if (prime_power_base(n, pt) != 0) {
            best = std::min(best, x - static_cast<double>(n));
            break;
        }
    }
    for (std::uint64_t n = fx + 1;; ++n) {
        if (static_cast<double>(n) == x) continue;
        if (prime_power_base(n, pt) != 0) {
            best = std::min(best, static_cast<double>(n) - x);
            break;
        }
    }
    return best;
}

// sum_{k>=1} x^{-2k-s}/(2k+s)
inline double trivial_zero_power_sum(double x, double s) {
    double total = 0.0;
    for (int k = 1; k <= 64; ++k) {
        const double term = std::pow(x, -2.0 * k - s) / (2.0 * k + s);
        total += term;
        if (term < 1e-18 * (1.0 + total)) break;
    }
    return total;
}

// sum_{k>=1} int_0^inf x^{-2k-s-t}/(2k+s+t) dt = sum_{k>=1} E1((2k+s) log x)
inline double trivial_zero_integral_sum(double x, double s) {
    const double lx = std::log(x);
    double total = 0.0;
    for (int k = 1; k <= 64; ++k) {
        const double term = boost::math::expint(1, (2.0 * k + s) * lx);
        total += term;
        if (term < 1e-18 * (1.0 + total)) break;
    }
    return total;
}

}  // namespace detail

// Calibrated remainder bounds; the implied absolute constants are set to 10.
inline double R1_bound(double x, double T, double s, const PrimeTable& pt) {
    const double gap = detail::nearest_prime_power_gap(x, pt);
    const double lx = std::log(x);
    const double lxT = std::log(x * T);
    return 10.0 * (lx * std::pow(x - 1.0, -s) * std::min(1.0, x / (T * gap)) +
                   lxT * lxT / T * (std::pow(2.0, s) * std::pow(x, 1.0 - s) +
                                    std::pow(2.0, -s) / lx));
}

inline double R2_bound(double x, double T, double s, const PrimeTable& pt) {
    const double gap = detail::nearest_prime_power_gap(x, pt);
    const double lx = std::log(x);
    const double lxT = std::log(x * T);
    return 10.0 * (std::pow(x, -s) * std::min(1.0, x / (T * gap)) +
                   lxT * lxT / (T * lx) * std::pow(x, 1.0 - s));
}

struct S1ZerosResult {
    std::complex<double> value;
    double error_bound = 0.0;
};

// Truncated explicit formula for S1(x,s) = sum'_{n<=x} Lambda(n)/n^s:
//   x^{1-s}/(1-s) - zeta'/zeta(s) - sum_{|Im(rho+s)|<=T} x^{rho-s}/(rho-s)
//   + sum_k x^{-2k-s}/(2k+s),
// with the s = 1 main term read as its limit log x - gamma.
inline S1ZerosResult S1_via_zeros(double x, std::complex<double> s, double T,
                                  const ZeroTable& zt, const PrimeTable& pt) {
    if (!(x >= 4.0)) throw domain_error("S1_via_zeros: need x >= 4");
    if (!(s.real() >= 0.0)) throw domain_error("S1_via_zeros: need Re s >= 0");
    if (s.imag() != 0.0)
        throw domain_error("S1_via_zeros: zeta'/zeta is evaluated on the real axis only");
    if (!(T >= 2.0 + 3.0 * std::abs(s.imag()))) throw domain_error("S1_via_zeros: T too small");
    if (zt.count() == 0 || zt.max_ordinate() < T)
        throw coverage_error("S1_via_zeros: zero table does not cover T = " + std::to_string(T));
    const double sr = s.real();
    const double lx = std::log(x);

    double main;
    if (sr == 1.0) {
        main = lx - k_gamma;
    } else if (sr == 0.0) {
        // zeta'(0)/zeta(0) = log(2 pi)
        main = x - std::log(2.0 * 3.14159265358979323846);
    } else {
        main = std::pow(x, 1.0 - sr) / (1.0 - sr) - zeta_logderiv(sr);
    }

    long double zsum = 0.0L;
    for (double g : zt.ordinates) {
        if (g > T) break;
        const std::complex<double> z(0.5 - sr, g);
        zsum += 2.0L * std::real(std::exp(z * lx) / z);
    }
    const double value = main - static_cast<double>(zsum) + detail::trivial_zero_power_sum(x, sr);
    return {std::complex<double>(value, 0.0), R1_bound(x, T, sr, pt)};
}

// One zero integral J = int_0^inf x^{rho-s-t}/(rho-s-t) dt, rho = 1/2 + i gamma,
// by quadrature truncated where the integrand has decayed below 1e-17.
inline std::complex<double> zero_integral_quad(double x, double s, double gamma) {
    const double lx = std::log(x);
    const std::complex<double> z(0.5 - s, gamma);
    auto f = [&](double t) { return std::exp((z - t) * lx) / (z - t); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 40.0 / lx, 12,
                                                                         1e-13);
}

// Main term of the same integral: x^{rho-s}/((rho-s) log x).
inline std::complex<double> zero_integral_main(double x, double s, double gamma) {
    const double lx = std::log(x);
    const std::complex<double> z(0.5 - s, gamma);
    return std::exp(z * lx) / (z * lx);
}

// Bound on |quad - main|: 10 x^{1/2-s}/(d |rho-s| log^2 x), d = dist(rho-s, [0,inf)).
inline double zero_integral_correction_bound(double x, double s, double gamma) {
    const std::complex<double> z(0.5 - s, gamma);
    const double d = z.real() >= 0.0 ? std::abs(z.imag()) : std::abs(z);
    const double lx = std::log(x);
    return 10.0 * std::pow(x, 0.5 - s) / (d * std::abs(z) * lx * lx);
}

struct S2ZerosResult {
    double value = 0.0;             // zero integrals by quadrature
    double value_main_terms = 0.0;  // zero integrals by the main-term shortcut
    double error_bound = 0.0;       // truncation remainder
    double correction_bound = 0.0;  // accumulated main-term correction bounds
};

// Truncated explicit formula for S2(x,s) = sum'_{n<=x} Lambda(n)/(n^s log n):
//   I((1-s)log x) + gamma + log log x + log(zeta(s)(s-1))
//   - sum_{|gamma|<=T} J + trivial-zero integrals.
inline S2ZerosResult S2_via_zeros(double x, double s, double T, const ZeroTable& zt,
                                  const PrimeTable& pt) {
    if (!(x >= 4.0)) throw domain_error("S2_via_zeros: need x >= 4");
    if (!(s >= 0.0 && s <= 1.0)) throw domain_error("S2_via_zeros: need s in [0,1]");
    if (!(T >= 2.0)) throw domain_error("S2_via_zeros: need T >= 2");
    if (zt.count() == 0 || zt.max_ordinate() < T)
        throw coverage_error("S2_via_zeros: zero table does not cover T = " + std::to_string(T));
    const double lx = std::log(x);
    const double base = big_I((1.0 - s) * lx) + k_gamma + std::log(lx) + log_phi_deriv(0, s);

    long double quad = 0.0L, mains = 0.0L;
    double corr = 0.0;
    for (double g : zt.ordinates) {
        if (g > T) break;
        quad += 2.0L * std::real(zero_integral_quad(x, s, g));
        mains += 2.0L * std::real(zero_integral_main(x, s, g));
        corr += 2.0 * zero_integral_correction_bound(x, s, g);
    }
    const double trivial = detail::trivial_zero_integral_sum(x, s);

    S2ZerosResult r;
    r.value = base - static_cast<double>(quad) + trivial;
    r.value_main_terms = base - static_cast<double>(mains) + trivial;
    r.error_bound = R2_bound(x, T, s, pt);
    r.correction_bound = corr;
    return r;
}

// -sum_{|Im rho|<=T} y^rho/rho = -2 sqrt(y) sum_{gamma<=T} Re(e^{i gamma log y}/(1/2+i gamma)),
// the zero-sum side of psi(y) - y + O(log^2 y).
inline double psi_minus_y_via_zeros(double y, double T, const ZeroTable& zt) {
    if (!(y >= 4.0)) throw domain_error("psi_minus_y_via_zeros: need y >= 4");
    if (zt.count() == 0 || zt.max_ordinate() < T)
        throw coverage_error("psi_minus_y_via_zeros: zero table does not cover T = " +
                             std::to_string(T));
    const double ly = std::log(y);
    const double ry = std::sqrt(y);
    long double sum = 0.0L;
    for (double g : zt.ordinates) {
        if (g > T) break;
        const std::complex<double> rho(0.5, g);
        sum += std::real(std::exp(std::complex<double>(0.0, g * ly)) / rho);
    }
    return -2.0 * ry * static_cast<double>(sum);
}

}  // namespace friable
