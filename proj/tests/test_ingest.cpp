#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "tempdyn/csv.hpp"
#include "tempdyn/errors.hpp"
#include "tempdyn/ingest.hpp"
#include "tempdyn/rng.hpp"

using namespace tempdyn;

namespace {

std::filesystem::path temp_csv(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

// Series of `n` days starting 2001-01-01 with every value present.
TemperatureSeries make_series(std::size_t n, double value) {
    TemperatureSeries s;
    s.station_id = "synthetic";
    s.start_date = civil_date{std::chrono::year{2001}, std::chrono::January, std::chrono::day{1}};
    s.values.assign(n, value);
    return s;
}

} // namespace

TEST_CASE("daily average of the day's extremes") {
    CHECK(daily_average(30.0, 20.0) == 25.0);
    for (double t : {-12.5, 0.0, 7.3, 41.0})
        CHECK(daily_average(t, t) == t);
    Rng r(101);
    for (int i = 0; i < 100; ++i) {
        const double lo = -20.0 + 40.0 * r.uniform();
        const double hi = lo + 25.0 * r.uniform();
        CHECK(daily_average(hi, lo) == (hi + lo) / 2.0);
        // shift invariance (up to float rounding)
        CHECK(daily_average(hi + 3.25, lo + 3.25) ==
              doctest::Approx(daily_average(hi, lo) + 3.25).epsilon(1e-14));
    }
    CHECK_THROWS_AS(daily_average(10.0, 11.0), validation_error);
    CHECK_FALSE(daily_average(std::optional<double>{}, 5.0).has_value());
    CHECK_FALSE(daily_average(5.0, std::optional<double>{}).has_value());
    CHECK(daily_average(std::optional<double>{30.0}, std::optional<double>{20.0}) == 25.0);
}

TEST_CASE("loading a well-formed station file") {
    const auto path = temp_csv("tempdyn_ok.csv", "date,tmax,tmin\n"
                                                 "2020-01-01,10,0\n"
                                                 "2020-01-02,12,2\n"
                                                 "2020-01-03,8,-2\n");
    const TemperatureSeries s = load_station_csv(path);
    REQUIRE(s.size() == 3);
    CHECK(s.station_id == "tempdyn_ok");
    CHECK(s.missing_count() == 0);
    CHECK(*s.values[0] == 5.0);
    CHECK(*s.values[1] == 7.0);
    CHECK(*s.values[2] == 3.0);
    CHECK(format_iso_date(s.date_at(2)) == "2020-01-03");
}

TEST_CASE("a skipped calendar day becomes a missing entry") {
    const auto path = temp_csv("tempdyn_gap.csv", "date,tmax,tmin\n"
                                                  "2020-01-01,10,0\n"
                                                  "2020-01-03,8,-2\n");
    const TemperatureSeries s = load_station_csv(path);
    REQUIRE(s.size() == 3);
    CHECK(s.missing_count() == 1);
    CHECK_FALSE(s.values[1].has_value());
    CHECK(s.missing_fraction() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("load rejects malformed input with location context") {
    const auto dup = temp_csv("tempdyn_dup.csv", "date,tmax,tmin\n"
                                                 "2020-01-01,10,0\n"
                                                 "2020-01-01,12,2\n");
    CHECK_THROWS_WITH_AS(load_station_csv(dup),
                         doctest::Contains("duplicate date 2020-01-01"), validation_error);

    const auto backwards = temp_csv("tempdyn_rev.csv", "date,tmax,tmin\n"
                                                       "2020-01-02,10,0\n"
                                                       "2020-01-01,12,2\n");
    CHECK_THROWS_WITH_AS(load_station_csv(backwards), doctest::Contains("strictly increasing"),
                         validation_error);

    const auto bad_field = temp_csv("tempdyn_bad.csv", "date,tmax,tmin\n"
                                                       "2020-01-01,10,0\n"
                                                       "2020-01-02,oops,2\n");
    CHECK_THROWS_WITH_AS(load_station_csv(bad_field), doctest::Contains("line 3"),
                         validation_error);

    const auto swapped = temp_csv("tempdyn_swap.csv", "date,tmax,tmin\n"
                                                      "2020-01-01,0,10\n");
    CHECK_THROWS_WITH_AS(load_station_csv(swapped), doctest::Contains("line 2"),
                         validation_error);

    const auto header = temp_csv("tempdyn_hdr.csv", "day,hi,lo\n2020-01-01,1,0\n");
    CHECK_THROWS_AS(load_station_csv(header), validation_error);
    CHECK_THROWS_AS(load_station_csv("/nonexistent/nowhere.csv"), io_error);
}

TEST_CASE("partial extremes load as missing; tavg column is authoritative") {
    const auto path = temp_csv("tempdyn_partial.csv", "date,tmax,tmin,tavg\n"
                                                      "2020-01-01,10,,\n"
                                                      "2020-01-02,,,4.25\n"
                                                      "2020-01-03,8,-2,\n");
    const TemperatureSeries s = load_station_csv(path);
    REQUIRE(s.size() == 3);
    CHECK_FALSE(s.values[0].has_value()); // tmin absent, no tavg
    CHECK(*s.values[1] == 4.25);          // tavg kept verbatim
    CHECK(*s.values[2] == 3.0);
}

TEST_CASE("write then load is a fixed point") {
    TemperatureSeries s = make_series(5, 0.0);
    s.tmax.assign(5, std::nullopt);
    s.tmin.assign(5, std::nullopt);
    s.values = {10.125, std::nullopt, -3.0000001, 0.1, 25.0};
    s.tmax[0] = 15.5;
    s.tmin[0] = 4.75;
    const auto path = std::filesystem::temp_directory_path() / "tempdyn_roundtrip.csv";
    write_station_csv(s, path);
    const TemperatureSeries r = load_station_csv(path, {.station_id = s.station_id});
    REQUIRE(r.size() == s.size());
    CHECK(r.start_date == s.start_date);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(r.values[i] == s.values[i]);
        CHECK(r.tmax[i] == s.tmax[i]);
        CHECK(r.tmin[i] == s.tmin[i]);
    }
    // Second generation must be byte-identical.
    const auto path2 = std::filesystem::temp_directory_path() / "tempdyn_roundtrip2.csv";
    write_station_csv(r, path2);
    CHECK(read_text_file(path) == read_text_file(path2));
}

TEST_CASE("filling a constant series reproduces the constant") {
    TemperatureSeries s = make_series(800, 21.5);
    s.values[500] = std::nullopt;
    const TemperatureSeries filled = fill_missing(s);
    CHECK(filled.missing_count() == 0);
    CHECK(*filled.values[500] == 21.5);
}

TEST_CASE("fill combines the day window and prior-year means equally") {
    // Year one (365 days) is 20 everywhere; year two is 10 everywhere. Day
    // index 465 (a mid-year-two day) goes missing: its 14 nearest neighbours
    // average 10 and its single prior-year value is 20, so the fill is
    // (10 + 20) / 2 averaged with weights 1/2 each => 15.
    TemperatureSeries s = make_series(730, 0.0);
    for (std::size_t i = 0; i < 365; ++i)
        s.values[i] = 20.0;
    for (std::size_t i = 365; i < 730; ++i)
        s.values[i] = 10.0;
    s.values[465] = std::nullopt;
    const TemperatureSeries filled = fill_missing(s);
    CHECK(*filled.values[465] == 15.0);
}

TEST_CASE("fill refuses a series missing more than a tenth of its days") {
    TemperatureSeries s = make_series(400, 5.0);
    for (std::size_t i = 100; i < 160; ++i) // 15%
        s.values[i] = std::nullopt;
    CHECK_THROWS_WITH_AS(fill_missing(s), doctest::Contains("10%"), validation_error);
}

TEST_CASE("fill is the identity on complete series and only writes gaps") {
    TemperatureSeries s = make_series(750, 0.0);
    Rng r(77);
    for (auto& v : s.values)
        v = 15.0 + 10.0 * r.normal();
    const TemperatureSeries same = fill_missing(s);
    REQUIRE(same.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(*same.values[i] == *s.values[i]); // bit-identical

    TemperatureSeries gappy = s;
    gappy.values[400] = std::nullopt;
    gappy.values[401] = std::nullopt; // consecutive gap, filled chronologically
    gappy.values[600] = std::nullopt;
    const TemperatureSeries filled = fill_missing(gappy);
    CHECK(filled.missing_count() == 0);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (gappy.values[i])
            CHECK(*filled.values[i] == *gappy.values[i]);
    // Deterministic: filling twice gives the same bytes.
    const TemperatureSeries filled2 = fill_missing(gappy);
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(*filled.values[i] == *filled2.values[i]);
}

TEST_CASE("fill reports the day it cannot repair") {
    // Missing day in the first year: no prior-year value exists.
    TemperatureSeries s = make_series(400, 5.0);
    s.values[200] = std::nullopt;
    CHECK_THROWS_WITH_AS(fill_missing(s), doctest::Contains("2001-07-20"), validation_error);

    // Missing day too close to the series start: not enough left neighbours.
    TemperatureSeries edge = make_series(500, 5.0);
    edge.values[3] = std::nullopt;
    CHECK_THROWS_WITH_AS(fill_missing(edge), doctest::Contains("2001-01-04"), validation_error);
}

TEST_CASE("descriptive statistics on degenerate and symmetric inputs") {
    const DescriptiveStats c = descriptive_stats(std::vector<double>(25, 3.7));
    CHECK(c.mean == doctest::Approx(3.7));
    CHECK(c.median == 3.7);
    CHECK(c.mode == 3.7);
    CHECK(c.minimum == 3.7);
    CHECK(c.maximum == 3.7);
    CHECK(c.stddev == 0.0);
    CHECK(c.skewness == 0.0);

    std::vector<double> sym;
    for (int i = 0; i < 40; ++i) {
        sym.push_back(-1.0);
        sym.push_back(1.0);
    }
    const DescriptiveStats s = descriptive_stats(sym);
    CHECK(s.mean == doctest::Approx(0.0));
    CHECK(s.skewness == doctest::Approx(0.0));
    CHECK(s.median == 0.0);

    CHECK_THROWS_AS(descriptive_stats(std::vector<double>{}), validation_error);
}

TEST_CASE("descriptive statistics match normal-sample expectations") {
    Rng r(303);
    std::vector<double> xs(10000);
    for (auto& x : xs)
        x = r.normal();
    const DescriptiveStats d = descriptive_stats(xs);
    CHECK(std::fabs(d.mean) < 0.05);
    CHECK(d.stddev == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::fabs(d.skewness) < 0.1);
    CHECK(d.kurtosis == doctest::Approx(3.0).epsilon(0.08));
    CHECK(d.minimum < -2.5);
    CHECK(d.maximum > 2.5);
}

TEST_CASE("mode uses tenth-degree bins with ties to the smaller value") {
    CHECK(descriptive_stats({1.04, 1.04, 2.0, 5.0}).mode == 1.0);
    CHECK(descriptive_stats({2.0, 2.0, -1.0, -1.0, 7.0}).mode == -1.0); // tie -> smallest
    CHECK(descriptive_stats({3.26, 3.31, 9.9}).mode == 3.3);            // 3.26 and 3.31 both bin to 3.3
}
