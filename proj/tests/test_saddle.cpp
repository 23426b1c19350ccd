#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>

#include <friable/saddle.hpp>

using friable::PrimeTable;
using friable::SaddleContext;

namespace {

const PrimeTable& table() {
    static const PrimeTable pt = friable::build_prime_table(1000);
    return pt;
}

// Independent bisection oracle for the saddle equation
// sum_{p<=y} log p/(p^s - 1) = log x; the left side is decreasing in s.
double alpha_bisect(double x, double y, const PrimeTable& pt) {
    auto resid = [&](double s) {
        double tot = 0.0;
        for (std::size_t i = 0; i < pt.primes.size(); ++i) {
            if (pt.primes[i] > y) break;
            tot += pt.logs[i] / std::expm1(s * pt.logs[i]);
        }
        return tot - std::log(x);
    };
    double lo = 1e-8, hi = 1.5;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (resid(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// G'/G(s,y) = d/ds [log zeta(s,y) - log F(s,y)], assembled from parts this
// module already exposes; the gfactor module will package the same quantity.
double g_over_G(double s, double y, const PrimeTable& pt) {
    const double ly = std::log(y);
    return friable::log_partial_zeta(s, y, pt, 1) - friable::log_phi_deriv(1, s) +
           ly * friable::big_I_deriv(1, (1.0 - s) * ly);
}

}  // namespace

TEST_CASE("log_partial_zeta single-prime values and errors", "[saddle]") {
    const auto& pt = table();
    CHECK(friable::log_partial_zeta(1.0, 2.0, pt, 0) == Catch::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(friable::log_partial_zeta(1.0, 2.0, pt, 1) == Catch::Approx(-std::log(2.0)).epsilon(1e-14));
    CHECK(friable::log_partial_zeta(1.0, 1.5, pt, 0) == 0.0);  // empty product
    CHECK_THROWS_AS(friable::log_partial_zeta(0.0, 100.0, pt, 1), friable::domain_error);
    CHECK_THROWS_AS(friable::log_partial_zeta(-0.5, 100.0, pt, 1), friable::domain_error);
    CHECK_THROWS_AS(friable::log_partial_zeta(1.0, 2000.0, pt, 1), friable::domain_error);
    CHECK_THROWS_AS(friable::log_partial_zeta(1.0, 100.0, pt, 5), friable::domain_error);
}

TEST_CASE("log_partial_zeta derivatives match finite differences", "[saddle]") {
    const auto& pt = table();
    // spec point: k=2 at s=0.7, y=1e3 against the k=1 centered difference
    {
        const double h = 1e-4;
        const double fd = (friable::log_partial_zeta(0.7 + h, 1000.0, pt, 1) -
                           friable::log_partial_zeta(0.7 - h, 1000.0, pt, 1)) / (2.0 * h);
        CHECK(friable::log_partial_zeta(0.7, 1000.0, pt, 2) == Catch::Approx(fd).epsilon(1e-6));
    }
    for (double s : {0.3, 0.55, 0.8, 1.1}) {
        for (double y : {50.0, 1000.0}) {
            for (int k = 1; k <= 4; ++k) {
                const double h = 1e-4;
                const double fd = (friable::log_partial_zeta(s + h, y, pt, k - 1) -
                                   friable::log_partial_zeta(s - h, y, pt, k - 1)) / (2.0 * h);
                INFO("s=" << s << " y=" << y << " k=" << k);
                CHECK(friable::log_partial_zeta(s, y, pt, k) == Catch::Approx(fd).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("solve_alpha at x = y brackets and converges", "[saddle]") {
    const auto& pt = table();
    // residual orientation: sum log p/(p^s-1) - log x is positive at the left
    // bracket end and nonpositive at s = 1 for x = y = 1000, so alpha <= 1
    auto resid = [&](double s) {
        return -friable::log_partial_zeta(s, 1000.0, pt, 1) - std::log(1000.0);
    };
    CHECK(resid(1e-8) > 0.0);
    CHECK(resid(1.0) <= 0.0);
    const double a = friable::solve_alpha(1000.0, 1000.0, pt);
    CHECK(a == Catch::Approx(0.978438906430290018).epsilon(1e-10));
    CHECK(std::abs(resid(a)) <= 1e-10 * std::log(1000.0));
}

TEST_CASE("solve_alpha matches the bisection oracle", "[saddle]") {
    const auto& pt = table();
    const double a = friable::solve_alpha(1e6, 1000.0, pt);
    CHECK(a == Catch::Approx(alpha_bisect(1e6, 1000.0, pt)).epsilon(1e-10));
    CHECK(a == Catch::Approx(0.810772226116981984).epsilon(1e-10));
    for (double x : {1e4, 1e8}) {
        for (double y : {30.0, 300.0, 1000.0}) {
            const double av = friable::solve_alpha(x, y, pt);
            INFO("x=" << x << " y=" << y);
            CHECK(av == Catch::Approx(alpha_bisect(x, y, pt)).epsilon(1e-10));
            const double r = std::log(x) + friable::log_partial_zeta(av, y, pt, 1);
            CHECK(std::abs(r) <= 1e-10 * std::log(x));
        }
    }
    CHECK_THROWS_AS(friable::solve_alpha(100.0, 1000.0, pt), friable::domain_error);
    CHECK_THROWS_AS(friable::solve_alpha(1e6, 1.5, pt), friable::domain_error);
}

TEST_CASE("solve_alpha size model at x=1e8, y=50", "[saddle]") {
    const auto& pt = table();
    const double a = friable::solve_alpha(1e8, 50.0, pt);
    CHECK(a > 0.0);
    CHECK(a < 1.0);
    CHECK(a == Catch::Approx(0.434915451289211036).epsilon(1e-10));
    // The first-order model log(1+y/log x)/log y carries a loglog y/log y
    // correction; at y = 50 the measured coefficient is 0.851, so the band
    // uses a unit coefficient (a 0.5 coefficient is too tight at this y).
    const double model = friable::alpha_size_estimate(1e8, 50.0);
    const double ratio = a / model;
    CHECK(ratio == Catch::Approx(1.29659942849).epsilon(1e-8));
    const double band = std::log(std::log(50.0)) / std::log(50.0);
    CHECK(std::abs(ratio - 1.0) <= band);
}

TEST_CASE("build_context at u = 1 degenerates cleanly", "[saddle]") {
    const auto& pt = table();
    const auto c = friable::build_context(1000.0, 1000.0, pt);
    CHECK(c.u == 1.0);
    CHECK(c.xi_u == 0.0);
    CHECK(c.sigma == 1.0);
    CHECK(c.alpha == Catch::Approx(0.978438906430290018).epsilon(1e-10));
    CHECK(std::abs(c.g_derivs[1]) <= 1e-9 * std::log(1000.0));
    CHECK(c.g_derivs[2] > 0.0);
    CHECK(c.f_derivs[2] > 0.0);
    CHECK(c.H > 0.0);
    CHECK_FALSE(c.near_boundary);
    CHECK(friable::taylor_gap_g(c) <= 0.0);
    CHECK(friable::taylor_gap_g(c) == Catch::Approx(-0.0059626782).margin(1e-8));
    CHECK(std::abs(friable::taylor_gap_f(c)) < 0.05);
}

TEST_CASE("build_context anchor x=1e6, y=1e3", "[saddle]") {
    const auto& pt = table();
    const auto c = friable::build_context(1e6, 1000.0, pt);
    CHECK(c.u == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(c.sigma == Catch::Approx(0.818112953067540377).epsilon(1e-12));
    CHECK(c.alpha == Catch::Approx(0.810772226116981984).epsilon(1e-10));
    CHECK(c.g_derivs[2] == Catch::Approx(61.1422632083025009).epsilon(1e-9));
    CHECK(c.B == Catch::Approx(0.978162374592278086).epsilon(1e-8));
    CHECK(std::abs(c.B - 1.0) <= 0.2);
    CHECK(c.H == Catch::Approx(0.024038171636869675).epsilon(1e-8));
    CHECK(c.H > 0.0);
    CHECK(c.C_sigma == friable::log_phi_deriv(1, c.sigma));
    CHECK(std::abs(c.g_derivs[1]) <= 1e-9 * std::log(1e6));
    CHECK_FALSE(c.near_boundary);
}

TEST_CASE("build_context B profile at y/log x = 5", "[saddle]") {
    const auto& pt = table();
    const double x = std::exp(200.0);  // y = 1000, so y/log x = 5
    const auto c = friable::build_context(x, 1000.0, pt);
    CHECK(c.alpha == Catch::Approx(0.311929286176171299).epsilon(1e-9));
    CHECK(c.sigma == Catch::Approx(0.279430285911873963).epsilon(1e-10));
    CHECK(c.B == Catch::Approx(0.820307773793975).epsilon(1e-8));
    CHECK(std::abs(c.B - friable::h_fn(5.0)) <= 0.3);
}

TEST_CASE("build_context domain errors and near_boundary flag", "[saddle]") {
    const auto& pt = table();
    CHECK_THROWS_AS(friable::build_context(100.0, 1000.0, pt), friable::domain_error);
    // y <= 1 + log x: for x = 1e6, the boundary sits at 14.815
    CHECK_THROWS_AS(friable::build_context(1e6, 14.0, pt), friable::domain_error);
    CHECK_THROWS_WITH(friable::build_context(1e6, 14.0, pt),
                      Catch::Matchers::ContainsSubstring("sigma"));
    // 1 + log x < y <= 2 log x is allowed but flagged
    CHECK(friable::build_context(1e6, 20.0, pt).near_boundary);
    CHECK_FALSE(friable::build_context(1e6, 29.0, pt).near_boundary);
}

TEST_CASE("f derivatives match finite differences", "[saddle]") {
    const auto& pt = table();
    for (double y : {100.0, 1000.0}) {
        const double ly = std::log(y);
        const auto c = friable::build_context(y == 100.0 ? 1e8 : 1e6, y, pt);
        auto f1 = [&](double t) {
            return std::log(c.x) + friable::log_phi_deriv(1, t) -
                   ly * friable::big_I_deriv(1, (1.0 - t) * ly);
        };
        auto f2 = [&](double t) {
            return friable::log_phi_deriv(2, t) + ly * ly * friable::big_I_deriv(2, (1.0 - t) * ly);
        };
        auto f3 = [&](double t) {
            return friable::log_phi_deriv(3, t) - ly * ly * ly * friable::big_I_deriv(3, (1.0 - t) * ly);
        };
        const double h = 1e-4, s = c.sigma;
        INFO("y=" << y);
        CHECK(c.f_derivs[1] == Catch::Approx((friable::f_value(s + h, c.x, y) -
                                              friable::f_value(s - h, c.x, y)) / (2 * h)).epsilon(1e-5));
        CHECK(c.f_derivs[2] == Catch::Approx((f1(s + h) - f1(s - h)) / (2 * h)).epsilon(1e-5));
        CHECK(c.f_derivs[3] == Catch::Approx((f2(s + h) - f2(s - h)) / (2 * h)).epsilon(1e-5));
        CHECK(c.f_derivs[4] == Catch::Approx((f3(s + h) - f3(s - h)) / (2 * h)).epsilon(1e-5));
    }
}

TEST_CASE("taylor_gap_g direct evaluation", "[saddle]") {
    const auto& pt = table();
    {
        const auto c = friable::build_context(1e6, 1000.0, pt);
        const double gap = friable::taylor_gap_g(c);
        CHECK(gap <= 0.0);
        CHECK(gap == Catch::Approx(-0.00162660208432204074).epsilon(1e-7));
        const double d = c.sigma - c.alpha;
        const double quad = 0.5 * c.g_derivs[2] * d * d;
        CHECK(std::abs(gap) >= quad / 5.0);
        CHECK(std::abs(gap) <= quad * 5.0);
    }
    {
        const auto c = friable::build_context(1e8, 100.0, pt);
        const double gap = friable::taylor_gap_g(c);
        CHECK(gap <= 0.0);
        CHECK(gap == Catch::Approx(-0.0382581284968899).epsilon(1e-7));
        const double d = c.sigma - c.alpha;
        const double quad = 0.5 * c.g_derivs[2] * d * d;
        CHECK(std::abs(gap) >= quad / 5.0);
        CHECK(std::abs(gap) <= quad * 5.0);
    }
}

TEST_CASE("taylor_gap_f decomposition", "[saddle]") {
    const auto& pt = table();
    {
        const auto c = friable::build_context(1e6, 1000.0, pt);
        const auto parts = friable::taylor_gap_f_parts(c);
        CHECK(parts.quadratic > 0.0);
        CHECK(parts.gap == Catch::Approx(parts.linear + parts.quadratic + parts.residual));
    }
    {
        const auto c = friable::build_context(1e8, 100.0, pt);
        const auto parts = friable::taylor_gap_f_parts(c);
        CHECK(parts.gap == Catch::Approx(0.0510187802150579).epsilon(1e-6));
        CHECK(parts.linear == Catch::Approx(0.0222215310029706).epsilon(1e-6));
        CHECK(parts.quadratic == Catch::Approx(0.0299156045421051).epsilon(1e-6));
        CHECK(parts.residual == Catch::Approx(-0.00111835533002).epsilon(1e-5));
        CHECK(std::abs(parts.residual) <= 0.5 * std::abs(parts.quadratic));
    }
}

TEST_CASE("sigma_alpha_gap_model against the direct gap", "[saddle]") {
    const auto& pt = table();
    {
        const auto c = friable::build_context(1e6, 1000.0, pt);
        const double direct = c.sigma - c.alpha;
        const double model = friable::sigma_alpha_gap_model(c, g_over_G(c.alpha, c.y, pt));
        CHECK(direct == Catch::Approx(0.00734072695056).epsilon(1e-6));
        CHECK(model == Catch::Approx(0.00747890912982).epsilon(1e-6));
        CHECK(direct / model > 1.0 / 3.0);
        CHECK(direct / model < 3.0);
    }
    {
        // y well above (log x)^3: both sides tiny, same sign
        const auto c = friable::build_context(1e4, 1000.0, pt);
        const double direct = c.sigma - c.alpha;
        const double model = friable::sigma_alpha_gap_model(c, g_over_G(c.alpha, c.y, pt));
        CHECK(std::abs(direct) < 0.05);
        CHECK(std::abs(model) < 0.05);
        CHECK(direct * model > 0.0);
        CHECK(direct == Catch::Approx(0.0144126472367).epsilon(1e-6));
        CHECK(model == Catch::Approx(0.0149276390541).epsilon(1e-6));
    }
    {
        // y just above 2 log x (29 is the next prime past 2 log 1e6 = 27.63):
        // here sigma sits below alpha, so both sides come out negative; they
        // still agree in sign and within a small factor.
        const auto c = friable::build_context(1e6, 29.0, pt);
        const double direct = c.sigma - c.alpha;
        const double model = friable::sigma_alpha_gap_model(c, g_over_G(c.alpha, c.y, pt));
        CHECK(direct == Catch::Approx(-0.13874844032).epsilon(1e-6));
        CHECK(model == Catch::Approx(-0.116385336621).epsilon(1e-6));
        CHECK(direct * model > 0.0);
        CHECK(direct / model > 1.0 / 3.0);
        CHECK(direct / model < 3.0);
    }
}

TEST_CASE("saddle grid invariants", "[saddle]") {
    const auto& pt = table();
    const double cells[][2] = {
        {1e6, 1000.0}, {1e8, 100.0}, {1e6, 29.0}, {1e4, 1000.0}, {std::exp(200.0), 1000.0},
    };
    for (const auto& cell : cells) {
        const auto c = friable::build_context(cell[0], cell[1], pt);
        INFO("x=" << cell[0] << " y=" << cell[1]);
        // g'' > 0 on a 50-point grid spanning [min(alpha,sigma), max(alpha,sigma)]
        const double lo = std::min(c.alpha, c.sigma), hi = std::max(c.alpha, c.sigma);
        for (int i = 0; i < 50; ++i) {
            const double t = lo + (hi - lo) * i / 49.0;
            CHECK(friable::log_partial_zeta(t, c.y, pt, 2) > 0.0);
        }
        // y^{1-sigma} tracks u log(u+1)
        const double ratio = std::pow(c.y, 1.0 - c.sigma) / (c.u * std::log(c.u + 1.0));
        CHECK(ratio >= 0.2);
        CHECK(ratio <= 5.0);
        // sigma - alpha = O(1/log y)
        if (c.y > std::log(c.x)) CHECK(std::abs(c.sigma - c.alpha) * std::log(c.y) <= 10.0);
        CHECK(c.H > 0.0);
        CHECK(c.sigma <= 1.0);
    }
}

TEST_CASE("log phi second derivative bracket on (0, 1]", "[saddle]") {
    double mn = 0.0, mx = -1.0;
    for (int i = 0; i <= 95; ++i) {
        const double t = 0.05 + 0.01 * i;
        const double v = friable::log_phi_deriv(2, t);
        CHECK(v >= -0.4);
        CHECK(v <= -0.1);
        mn = std::min(mn == 0.0 ? v : mn, v);
        mx = std::max(mx, v);
    }
    CHECK(mn == Catch::Approx(-0.350534544272).epsilon(1e-9));
    CHECK(mx == Catch::Approx(-0.18754623284).epsilon(1e-9));
}
