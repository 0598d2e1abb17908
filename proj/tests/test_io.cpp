#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "brightdark/io.hpp"
#include "brightdark/states.hpp"

using namespace brightdark;

namespace {
std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}
}  // namespace

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
    EXPECT_EQ(io::format_double(0.0), "0");
    EXPECT_EQ(io::format_double(-0.0), "0");
    EXPECT_EQ(io::format_double(1.0), "1");
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
    for (double x : {std::numbers::pi, -1e-300, 6.02214076e23, 1.0 / 3.0})
        EXPECT_EQ(std::stod(io::format_double(x)), x);
}

TEST(FringeCsv, HeaderAndRows) {
    const HilbertConfig c(2, 2);
    const FringeScan scan = fringe_scan(upsilon(c), linear_grid(0.0, std::numbers::pi, 3));
    std::ostringstream out;
    io::write_fringe_csv(out, scan);
    const auto rows = lines(out.str());
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "phi,nA,nB");
    EXPECT_EQ(rows[1].substr(0, 2), "0,");
    std::ostringstream again;
    io::write_fringe_csv(again, fringe_scan(upsilon(c), linear_grid(0.0, std::numbers::pi, 3)));
    EXPECT_EQ(out.str(), again.str());
}

TEST(TimeSeriesCsv, ColumnsFollowChannels) {
    TimeSeries series({0.0, 0.5});
    series.add_channel("sigma_ee", {1.0, 0.25});
    series.add_channel("nA", {0.0, 0.375});
    std::ostringstream out;
    io::write_timeseries_csv(out, series);
    EXPECT_EQ(out.str(), "t,sigma_ee,nA\n0,1,0\n0.5,0.25,0.375\n");
}

TEST(Json, FringeScanSummary) {
    const HilbertConfig c(2, 2);
    const FringeScan scan = fringe_scan(upsilon(c), linear_grid(0.0, 2.0 * std::numbers::pi, 101));
    const auto j = io::to_json(scan);
    EXPECT_EQ(j.at("points").get<int>(), 101);
    EXPECT_NEAR(j.at("visibility_A").get<double>(), 0.5, 1e-12);
    EXPECT_NEAR(j.at("visibility_B").get<double>(), 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(j.at("phi_max").get<double>(), 2.0 * std::numbers::pi);
    EXPECT_EQ(j.at("leakage").get<double>(), 0.0);
}

TEST(Json, DecompositionSchema) {
    const auto j = io::to_json(decompose(upsilon(HilbertConfig(2, 4))));
    for (const char* key : {"entries", "residual", "norm_squared", "vacuum_weight", "dark_weight", "mss_weight",
                            "intermediate_weight", "non_dark_weight", "non_mss_weight"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_NEAR(j.at("dark_weight").get<double>(), 0.875, 1e-12);
    EXPECT_NEAR(j.at("mss_weight").get<double>(), 0.125, 1e-12);
    ASSERT_EQ(j.at("entries").size(), 4u);
    for (const auto& e : j.at("entries")) {
        EXPECT_EQ(e.at("n").size(), 2u);
        EXPECT_EQ(e.at("N").get<int>(), e.at("n")[0].get<int>() + e.at("n")[1].get<int>());
    }
}

TEST(Json, ParamsAndGateReports) {
    SystemParams p;
    p.kappa = {0.01, 0.02};
    const auto sp = io::to_json(p);
    EXPECT_EQ(sp.at("kappa").size(), 2u);
    EXPECT_EQ(sp.at("mode_count").get<int>(), 2);

    const GateParams gp = GateParams::from_xi(1.0, 50.0, std::numbers::pi);
    EXPECT_NEAR(io::to_json(gp).at("xi").get<double>(), std::numbers::pi, 1e-12);

    const auto table = io::to_json(cphase_truth_table(gp));
    ASSERT_EQ(table.size(), 4u);
    EXPECT_EQ(table[3].at("atom"), "g1");
    EXPECT_EQ(table[3].at("mode"), "psi11");
    EXPECT_NEAR(table[3].at("overlap_re").get<double>(), -1.0, 1e-12);

    const auto report = io::to_json(validate_scaling(1.0, std::numbers::pi, 20.0, 40.0));
    EXPECT_EQ(report.at("checks").size(), 2u);
    EXPECT_TRUE(report.at("checks")[0].contains("peak_leakage"));
    EXPECT_TRUE(report.at("scales_within_1_5").get<bool>());
}
