#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <string>

#include <friable/report.hpp>

using namespace friable;
using nlohmann::json;

static const PrimeTable& table5() {
    static const PrimeTable t = build_prime_table(100000);
    return t;
}

TEST_CASE("approximation report round-trips through JSON") {
    const auto r = build_report(1e4, 19.0, table5());
    const json j1 = r;
    ApproximationReport back;
    json::parse(j1.dump()).get_to(back);
    const json j2 = back;
    CHECK(j1 == j2);
    CHECK(back.psi_exact == r.psi_exact);
    CHECK(back.x == 1e4);
    CHECK(back.ratios.size() == 7);
    CHECK(back.ratios.at("sharp") == r.ratios.at("sharp"));
    CHECK(back.sandwich_ok == r.sandwich_ok);
}

TEST_CASE("NaN fields survive the JSON round trip as nulls") {
    const auto r = build_report(1e12, 1e3, table5());  // Lambda over budget -> NaN
    REQUIRE(std::isnan(r.lambda_debruijn));
    const json j = r;
    CHECK(j.at("lambda_debruijn").is_null());
    ApproximationReport back;
    json::parse(j.dump()).get_to(back);
    CHECK(std::isnan(back.lambda_debruijn));
    CHECK(json(back) == j);
    CHECK(back.skip_reason == r.skip_reason);
}

TEST_CASE("run config echoes losslessly") {
    RunConfig cfg;
    cfg.subcommand = "compare";
    cfg.x = 1e6;
    cfg.y = 1000.0;
    cfg.grid = "default";
    cfg.zeros_path = "data/zeta_zeros_300.txt";
    cfg.T = 100.0;
    cfg.format = "json";
    cfg.budget = 1e8;
    cfg.tolerance_overrides = {{"sandwich_delta", 0.25}, {"ht_rel_slack", 1.5}};
    const json j1 = cfg;
    RunConfig back;
    json::parse(j1.dump()).get_to(back);
    CHECK(json(back) == j1);
    CHECK(back.tolerance_overrides.at("sandwich_delta") == 0.25);

    const json doc = make_document(cfg);
    CHECK(doc.at("schema_version") == 1);
    CHECK(doc.at("config") == j1);
}

TEST_CASE("smaller records round-trip too") {
    ScanGrid g;
    g.x_values = {1e4};
    g.y_rules = {{YRule::Kind::absolute, 100.0}};
    const auto pom = pomerance_scan(g, table5());
    REQUIRE(pom.size() == 1);
    const json jp = pom[0];
    PomeranceCell pc;
    jp.get_to(pc);
    CHECK(json(pc) == jp);
    CHECK(pc.holds == pom[0].holds);

    const auto phase = phase_diagnostic(1e6, 87.0, table5());
    const json jd = phase;
    PhaseDiagnostic pd;
    jd.get_to(pd);
    CHECK(json(pd) == jd);
    CHECK(pd.D1 == phase.D1);

    const auto ineq = ineq_theorem_report(1e6, 1e3, table5());
    const json ji = ineq;
    IneqReport ir;
    ji.get_to(ir);
    CHECK(json(ir) == ji);
    CHECK(ir.residual == ineq.residual);

    const auto lres = constant_L_search();
    const json jl = lres;
    ConstantLResult lr;
    jl.get_to(lr);
    CHECK(json(lr) == jl);
    CHECK(lr.value == lres.value);

    const auto gb = g_breakdown(0.6, 1e3, table5());
    const json jg = gb;
    GFactorBreakdown gb2;
    jg.get_to(gb2);
    CHECK(json(gb2) == jg);
    CHECK(gb2.logG_total == gb.logG_total);
    CHECK_FALSE(gb2.has_zeros);
}

static std::size_t comma_count(const std::string& s) {
    std::size_t n = 0;
    bool quoted = false;
    for (char c : s) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) ++n;
    }
    return n;
}

TEST_CASE("CSV has a fixed column layout and round-trip numbers") {
    const auto r = build_report(1e4, 19.0, table5());
    const std::string header = report_csv_header();
    const std::string row = report_csv_row(r);
    CHECK(comma_count(header) == 22);
    CHECK(comma_count(row) == 22);

    // first field parses back to x exactly
    CHECK(std::strtod(row.c_str(), nullptr) == 1e4);
    CHECK(row.find("true") != std::string::npos);  // has_exact

    const auto reports = std::vector<ApproximationReport>{r, build_report(1e4, 28.0, table5())};
    const std::string csv = reports_to_csv(reports);
    CHECK(csv.find("\r\n") != std::string::npos);
    std::size_t lines = 0;
    for (std::size_t pos = 0; (pos = csv.find("\r\n", pos)) != std::string::npos; pos += 2)
        ++lines;
    CHECK(lines == 3);  // header + 2 rows

    // deterministic: same input, same bytes
    CHECK(csv == reports_to_csv(reports));
}

TEST_CASE("CSV quoting follows RFC 4180") {
    CHECK(detail::csv_quote("plain") == "plain");
    CHECK(detail::csv_quote("a,b") == "\"a,b\"");
    CHECK(detail::csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(detail::csv_quote("line\nbreak") == "\"line\nbreak\"");

    ApproximationReport r;
    r.skip_reason = "over budget, estimate 4.9e9";
    const std::string row = report_csv_row(r);
    CHECK(row.find("\"over budget, estimate 4.9e9\"") != std::string::npos);
    CHECK(comma_count(row) == 22);

    PomeranceCell c;
    c.x = 1e14;
    c.y = 1000.0;
    c.skip_reason = "skipped, too big";
    const std::string prow = pomerance_csv_row(c);
    CHECK(comma_count(prow) == 5);
    CHECK(comma_count(pomerance_csv_header()) == 5);
    CHECK(prow.find("\"skipped, too big\"") != std::string::npos);
}

TEST_CASE("CSV numbers carry full precision") {
    CHECK(std::strtod(detail::csv_num(0.1).c_str(), nullptr) == 0.1);
    const double v = -0.6662170392355399;
    CHECK(std::strtod(detail::csv_num(v).c_str(), nullptr) == v);
    CHECK(detail::csv_num(std::numeric_limits<double>::quiet_NaN()).empty());
}

TEST_CASE("text rendering mentions every approximation") {
    const auto r = build_report(1e4, 19.0, table5());
    const std::string text = report_text(r);
    for (const char* needle : {"psi_exact", "x_rho", "lambda_debruijn", "ht_saddle",
                               "main_formula_sigma", "sharp_corrected", "ratio"})
        CHECK(text.find(needle) != std::string::npos);
    CHECK(text.find("skipped") == std::string::npos);

    const auto degraded = build_report(1e12, 1e3, table5());
    CHECK(report_text(degraded).find("skipped") != std::string::npos);
}
