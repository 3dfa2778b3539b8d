#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "fanostat/error.hpp"
#include "fanostat/scan.hpp"

using namespace fanostat;
using Catch::Matchers::WithinAbs;

namespace {

std::size_t column(const Series& s, const std::string& name) {
    const auto it = std::find(s.columns.begin(), s.columns.end(), name);
    REQUIRE(it != s.columns.end());
    return static_cast<std::size_t>(it - s.columns.begin());
}

}  // namespace

TEST_CASE("grid parsing") {
    const Grid g = Grid::parse("-40:40:81");
    CHECK(g.values().size() == 81);
    CHECK(g.values().front() == -40.0);
    CHECK(g.values().back() == 40.0);
    CHECK(g.values()[40] == 0.0);
    CHECK_THROWS_AS(Grid::parse("1:0:5"), Error);
    CHECK_THROWS_AS(Grid::parse("0:1:1"), Error);
    CHECK_THROWS_AS(Grid::parse("0:1"), Error);
    CHECK_THROWS_AS(Grid::parse("a:1:3"), Error);
}

TEST_CASE("mode names") {
    for (ScanMode m : {ScanMode::kTransmission, ScanMode::kG2Zero, ScanMode::kG2Trace, ScanMode::kDecompose,
                       ScanMode::kOracleCheck, ScanMode::kFpBackground}) {
        CHECK(parse_scan_mode(scan_mode_name(m)) == m);
    }
    CHECK_THROWS_AS(parse_scan_mode("spectrum"), Error);
}

TEST_CASE("transmission scan of the reference configuration") {
    ScanRequest r;
    r.grid = {-40.0, 40.0, 161};
    const Series s = run_scan(r);
    const std::size_t t = column(s, "transmission");
    auto lo = s.rows.begin(), hi = s.rows.begin();
    for (auto it = s.rows.begin(); it != s.rows.end(); ++it) {
        if ((*it)[t] < (*lo)[t]) lo = it;
        if ((*it)[t] > (*hi)[t]) hi = it;
    }
    CHECK_THAT((*lo)[0], WithinAbs(9.0, 2.5));
    CHECK_THAT((*hi)[0], WithinAbs(-9.0, 2.5));
}

TEST_CASE("ideal g2 scan at T0 = 1 only bunches") {
    Config c = Config::parse("t0 = 1\nbeta = 1\ndephasing_time_ps = inf\naverage = off\nconvolve = off\n");
    const Series s = run_scan(scan_request_from(c, ScanMode::kG2Zero));
    const std::size_t g = column(s, "g2");
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        if (!s.flags.empty() && !s.flags[i].empty()) continue;
        CHECK(s.rows[i][g] >= 1.0 - 1e-12);
    }
}

TEST_CASE("decompose scan has three terms per T0") {
    const Series s = run_scan(scan_request_from(Config::parse("grid = -40:40:9\n"), ScanMode::kDecompose));
    CHECK(s.columns.size() == 2 + 4 * 2);
    CHECK(s.rows.size() == 9);
    const std::size_t p = column(s, "product_T0=1");
    const std::size_t b = column(s, "bound_T0=0.15");
    const std::size_t total = column(s, "total_T0=0.15");
    for (const auto& row : s.rows) {
        CHECK(row[p] == 1.0);
        CHECK(row[b] >= 0.0);
        CHECK(row[total] > 0.0);
    }
}

TEST_CASE("singular points are flagged rather than thrown") {
    // ideal transparent background: the Fano zero sits exactly at zero detuning
    Config c = Config::parse("t0 = 1\nbeta = 1\ndephasing_time_ps = inf\naverage = off\nconvolve = off\ngrid = -1:1:3\n");
    const Series s = run_scan(scan_request_from(c, ScanMode::kG2Zero));
    REQUIRE(s.rows.size() == 3);
    REQUIRE(s.flags.size() == 3);
    CHECK(s.flags[1] == "divergent");
    CHECK(s.flags[0].empty());
    CHECK(std::isinf(s.rows[1][2]));
}

TEST_CASE("oracle-check scan") {
    Config c = Config::parse("grid = -10:10:3\noracle_tau_ps = 0,300\n");
    const Series s = run_scan(scan_request_from(c, ScanMode::kOracleCheck));
    CHECK(s.rows.size() == 6);
    const std::size_t d = column(s, "g1_abs_diff");
    for (const auto& row : s.rows) CHECK(row[d] < 1e-6);
}

TEST_CASE("fp-background scan") {
    Config c = Config::parse("fp_reflectivity = 0.3\ngrid = 913:917:5\n");
    const Series s = run_scan(scan_request_from(c, ScanMode::kFpBackground));
    CHECK(s.rows.size() == 5);
    CHECK_THAT(s.rows[2][1], WithinAbs(1.0, 1e-12));
    CHECK(s.rows[1][1] < 1.0);
    for (const auto& row : s.rows) CHECK_THAT(row[2] * row[2], WithinAbs(row[1], 1e-15));
    CHECK_THROWS_AS(run_scan(scan_request_from(Config::parse("fp_reflectivity = 1\n"), ScanMode::kFpBackground)), Error);
}

TEST_CASE("scans are deterministic") {
    const ScanRequest r = scan_request_from(Config::parse("grid = -30:30:7\n"), ScanMode::kG2Zero);
    CHECK(render_series(run_scan(r), SeriesFormat::kCsv) == render_series(run_scan(r), SeriesFormat::kCsv));
}
