#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mlogs/dataset.hpp"
#include "mlogs/error.hpp"
#include "support.hpp"

using namespace mlogs;

namespace {

WellDataset small_well() {
    WellDataset ds("W1", {10.0, 11.0, 12.0, 13.0}, "M");
    ds.put_curve("GR", CurveData::from_optional({1.0, 2.0, std::nullopt, 4.0}, "GAPI"));
    ds.put_curve("RHOB", CurveData::from_values({2.1, 2.2, 2.3, 2.4}, "G/CC"));
    return ds;
}

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("curve data: non-finite values become missing") {
    const CurveData c({1.0, std::numeric_limits<double>::quiet_NaN(), INFINITY}, {false, false, false});
    CHECK(c.present_count() == 1);
    CHECK(c.is_missing(1));
    CHECK(c.is_missing(2));
    CHECK(c == CurveData::from_optional({1.0, std::nullopt, std::nullopt}));
}

TEST_CASE("put_curve validates names and lengths") {
    WellDataset ds("W", {1.0, 2.0});
    CHECK(code_of([&] { ds.put_curve("G R", CurveData::from_values({1, 2})); }) == ErrorCode::InvalidName);
    CHECK(code_of([&] { ds.put_curve("GR.X", CurveData::from_values({1, 2})); }) == ErrorCode::InvalidName);
    CHECK(code_of([&] { ds.put_curve("GR", CurveData::from_values({1})); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([&] { (void)ds.curve("NOPE"); }) == ErrorCode::UnknownCurve);
    CHECK(code_of([] { WellDataset bad("W", {2.0, 1.0}); bad.validate(); }) == ErrorCode::NonMonotoneDepth);
}

TEST_CASE("rename_curve") {
    const auto ds = small_well();
    const auto r = rename_curve(ds, "GR", "GR_CLEAN");
    CHECK(r.curve_names() == std::vector<std::string>{"GR_CLEAN", "RHOB"});
    CHECK(r.curve("GR_CLEAN") == ds.curve("GR"));
    CHECK(rename_curve(ds, "GR", "GR") == ds);
    CHECK(code_of([&] { (void)rename_curve(ds, "GR", "RHOB"); }) == ErrorCode::NameCollision);
    CHECK(code_of([&] { (void)rename_curve(ds, "GR", "bad name"); }) == ErrorCode::InvalidName);
    CHECK(code_of([&] { (void)rename_curve(ds, "XX", "YY"); }) == ErrorCode::UnknownCurve);
}

TEST_CASE("apply_limits masks outside the closed range") {
    const auto ds = small_well();
    const auto r = apply_limits(ds, "GR", 1.0, 2.0);
    CHECK(r.newly_masked == 1);
    CHECK(r.dataset.curve("GR") == CurveData::from_optional({1.0, 2.0, std::nullopt, std::nullopt}, "GAPI"));
    CHECK(r.dataset.curve("RHOB") == ds.curve("RHOB"));
    CHECK(code_of([&] { (void)apply_limits(ds, "GR", 3.0, 1.0); }) == ErrorCode::InvalidRange);
    CHECK(code_of([&] { (void)apply_limits(ds, "GR", NAN, 1.0); }) == ErrorCode::InvalidRange);
}

TEST_CASE("select_curves and select_rows") {
    const auto ds = small_well();
    CHECK(select_curves(ds, {"RHOB"}).curve_names() == std::vector<std::string>{"RHOB"});
    CHECK(code_of([&] { (void)select_curves(ds, {"RHOB", "RHOB"}); }) == ErrorCode::NameCollision);
    CHECK(code_of([&] { (void)select_curves(ds, {"X"}); }) == ErrorCode::UnknownCurve);
    const std::vector<std::size_t> rows{0, 3};
    const auto s = select_rows(ds, rows);
    CHECK(s.depth() == std::vector<double>{10.0, 13.0});
    CHECK(s.curve("GR").present_values() == std::vector<double>{1.0, 4.0});
}

TEST_CASE("summary_stats: worked example") {
    const auto s = summary_stats(CurveData::from_values({1, 2, 3, 4}));
    CHECK(s.count == 4);
    CHECK(s.mean == doctest::Approx(2.5));
    REQUIRE(s.std);
    CHECK(*s.std == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(s.p25 == doctest::Approx(1.75));
    CHECK(s.p50 == doctest::Approx(2.5));
    CHECK(s.p75 == doctest::Approx(3.25));
    CHECK(s.min == 1);
    CHECK(s.max == 4);

    const auto one = summary_stats(CurveData::from_values({7}));
    CHECK_FALSE(one.std);
    CHECK(one.p25 == 7);
    CHECK(code_of([] { (void)summary_stats(CurveData::from_optional({std::nullopt})); }) == ErrorCode::AllMissing);
}

TEST_CASE("quantiles match the sort-and-interpolate oracle") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> len(4, 500);
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = test::random_curve(rng, len(rng), 0.1, 50.0, 20.0);
        if (c.present_count() == 0) continue;
        const auto s = summary_stats(c);
        const auto v = c.present_values();
        CHECK(std::abs(s.p25 - test::oracle_quantile(v, 0.25)) <= 1e-12 * std::max(1.0, std::abs(s.p25)));
        CHECK(std::abs(s.p50 - test::oracle_quantile(v, 0.50)) <= 1e-12 * std::max(1.0, std::abs(s.p50)));
        CHECK(std::abs(s.p75 - test::oracle_quantile(v, 0.75)) <= 1e-12 * std::max(1.0, std::abs(s.p75)));
    }
}

TEST_CASE("tukey fences") {
    const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 100};
    const auto f = tukey_fences(v, 1.5);
    CHECK(f.q1 == doctest::Approx(3.25));
    CHECK(f.q3 == doctest::Approx(7.75));
    CHECK(f.lo == doctest::Approx(-3.5));
    CHECK(f.hi == doctest::Approx(14.5));
}

TEST_CASE("concat_wells tags duplicate wells and fills absent curves") {
    auto a = small_well();
    auto b = small_well();
    WellDataset c("OTHER", {1.0});
    c.put_curve("DT", CurveData::from_values({80.0}));
    const auto t = concat_wells({a, b, c}, {"GR", "DT"});
    CHECK(t.columns() == std::vector<std::string>{"WELL", "DEPT", "GR", "DT"});
    REQUIRE(t.rows.size() == 9);
    CHECK(t.rows[0].well == "W1");
    CHECK(t.rows[4].well == "W1_2");
    CHECK(t.rows[4].row_index == 0);
    CHECK(t.rows[8].well == "OTHER");
    CHECK(t.rows[8].values[1] == 80.0);
    CHECK_FALSE(t.rows[8].values[0].has_value());
    CHECK_FALSE(t.rows[2].values[0].has_value());
    CHECK(t.column_index("DT") == 1u);
    CHECK(code_of([&] { (void)concat_wells({a}, {"NOPE"}); }) == ErrorCode::UnknownCurve);
    CHECK(curve_union({a, c}) == std::vector<std::string>{"GR", "RHOB", "DT"});
}

TEST_CASE("mnemonic validity") {
    CHECK(is_valid_mnemonic("GR_1"));
    CHECK(is_valid_mnemonic("FRACTURE_PRED"));
    CHECK_FALSE(is_valid_mnemonic(""));
    CHECK_FALSE(is_valid_mnemonic("A B"));
    CHECK_FALSE(is_valid_mnemonic("A:B"));
    CHECK_FALSE(is_valid_mnemonic("A,B"));
}
