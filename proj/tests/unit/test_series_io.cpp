#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "json.hpp"

#include "fanostat/error.hpp"
#include "fanostat/fit_report.hpp"
#include "fanostat/series_io.hpp"

using namespace fanostat;

namespace {

std::string tmp(const std::string& name) { return std::string(FANOSTAT_TEST_TMP) + "/" + name; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("format_double round-trips") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 300));
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("empty series renders header only") {
    Series s;
    s.columns = {"detuning_uev", "g2"};
    CHECK(render_series(s, SeriesFormat::kCsv) == "detuning_uev,g2\n");
}

TEST_CASE("metadata block records conventions") {
    Series s;
    for (const auto& [k, v] : standard_metadata()) s.add_metadata(k, v);
    s.columns = {"x"};
    const std::string csv = render_series(s, SeriesFormat::kCsv);
    CHECK(csv.find("# tau_convention: ") != std::string::npos);
    CHECK(csv.find("# frequency_convention: ordinary") != std::string::npos);
    const auto j = nlohmann::json::parse(render_series(s, SeriesFormat::kJson));
    CHECK(j["metadata"].contains("tau_convention"));
    CHECK(j["metadata"]["tool"].get<std::string>().rfind("fanostat", 0) == 0);
}

TEST_CASE("write then load reproduces values bit-exactly") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<DataPoint> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({n(rng) * 40, 1.0 + n(rng) / 3, std::abs(n(rng)) * 0.03 + 1e-9});
    const std::string path = tmp("roundtrip.csv");
    write_points(pts, path, "transmission");

    LoadReport report;
    const std::vector<DataPoint> back = load_points(path, &report);
    REQUIRE(back.size() == pts.size());
    CHECK(report.rows_read == pts.size());
    CHECK(report.rejected.empty());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(back[i].detuning_uev == pts[i].detuning_uev);
        CHECK(back[i].value == pts[i].value);
        CHECK(back[i].uncertainty == pts[i].uncertainty);
    }

    Series s;
    s.columns = {"a", "b"};
    s.add_row({1.0 / 3.0, -2e-300});
    s.add_row({std::numeric_limits<double>::infinity(), 5.0}, "divergent");
    write_series(s, tmp("series.csv"), SeriesFormat::kCsv);
    const Series r = read_series_csv(tmp("series.csv"));
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0] == s.rows[0]);
    CHECK(std::isinf(r.rows[1][0]));
    CHECK(r.flags[1] == "divergent");
}

TEST_CASE("measurement loading") {
    write_file(tmp("three.csv"), "detuning_uev,transmission,uncertainty\n-1,0.9,0.01\n0,0.5,0.01\n1,1.1,0.02\n");
    CHECK(load_points(tmp("three.csv")).size() == 3);

    write_file(tmp("nanrow.csv"), "-1,0.9,0.01\n0,nan,0.01\n1,1.1,0.02\n");
    LoadReport report;
    CHECK(load_points(tmp("nanrow.csv"), &report).size() == 2);
    REQUIRE(report.rejected.size() == 1);
    CHECK(report.rejected[0].line == 2);

    write_file(tmp("cells.csv"), "-1,0.9,0.01\n0,abc,0.01\n");
    try {
        load_points(tmp("cells.csv"));
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::kParse);
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    write_file(tmp("columns.csv"), "-1,0.9\n");
    CHECK_THROWS_AS(load_points(tmp("columns.csv")), Error);
    write_file(tmp("empty.csv"), "");
    CHECK_THROWS_AS(load_points(tmp("empty.csv")), Error);
    CHECK_THROWS_AS(load_points(tmp("missing.csv")), Error);
}

TEST_CASE("histogram loading") {
    write_file(tmp("hist.csv"), "# detuning_uev: 9\ntau_ps,counts\n-100,40\n0,80\n100,40\n");
    const Histogram h = load_histogram(tmp("hist.csv"));
    CHECK(h.detuning_uev == 9.0);
    CHECK(h.counts.size() == 3);

    MeasurementSources src;
    src.transmission = tmp("three.csv");
    src.histograms = {tmp("hist.csv")};
    src.reference_energy_uev = 1.0e6;
    const MeasurementSet m = load_measurements(src);
    CHECK(m.transmission.size() == 3);
    CHECK(m.histograms.size() == 1);
    CHECK(m.reference_energy_uev == 1.0e6);
}

TEST_CASE("unwritable output path is an IO error") {
    Series s;
    s.columns = {"x"};
    try {
        write_series(s, "/nonexistent/dir/out.csv", SeriesFormat::kCsv);
        FAIL("expected an io error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::kIo);
        CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
    }
}

TEST_CASE("fit report structure") {
    const PhysicalParams truth = reference_configuration();
    ModelSettings fast;
    fast.convolve = false;
    const MeasurementSet data = synthesize(truth, reference_design(), fast);
    FitOptions o;
    o.model = fast;
    o.free.fill(false);
    o.free[kT0] = true;
    const FitResult r = fit_full_model(data, truth, o);
    FitReportContext ctx;
    ctx.options = &o;
    const auto j = nlohmann::json::parse(fit_report_json(r, ctx));
    CHECK(j["parameters"]["t0"]["value"].get<double>() == r.params.t0);
    CHECK(j["parameters"].contains("omega0_thz"));
    CHECK(j["dimensionless"].contains("zeta"));
    CHECK(j["residuals"].size() == 34);
    CHECK(j["assumptions"]["frequency_convention"].get<std::string>().rfind("ordinary", 0) == 0);
    CHECK(j["assumptions"].contains("tau_convention"));
    CHECK(j["assumptions"]["fit_mode"] == "joint");
    CHECK(residual_table(r).rows.size() == 34);
}
