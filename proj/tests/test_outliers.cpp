#include <doctest.h>

#include <random>

#include "mlogs/eda.hpp"
#include "mlogs/error.hpp"
#include "mlogs/outliers.hpp"
#include "support.hpp"

using namespace mlogs;
using namespace mlogs::outliers;

namespace {

WellDataset spike_well() {
    WellDataset ds("SPIKE", {1, 2, 3, 4, 5});
    ds.put_curve("GR", CurveData::from_values({0, 0, 0, 0, 100}));
    ds.put_curve("RHOB", CurveData::from_values({2.1, 2.2, 2.3, 2.4, 2.5}));
    return ds;
}

}  // namespace

TEST_CASE("zscore flags") {
    const auto c = CurveData::from_values({0, 0, 0, 0, 100});
    CHECK(zscore_flags(c, 1.5) == std::vector<std::size_t>{4});
    CHECK(zscore_flags(c, 3.0).empty());
    CHECK(zscore_flags(CurveData::from_values({5, 5, 5}), 1.0).empty());
    CHECK_THROWS_AS((void)zscore_flags(c, 0.0), Error);
    CHECK_THROWS_AS((void)zscore_flags(CurveData::from_values({1}), 1.0), Error);
    CHECK_THROWS_AS((void)zscore_flags(CurveData::from_optional({std::nullopt}), 1.0), Error);
}

TEST_CASE("iqr flags") {
    CHECK(iqr_flags(CurveData::from_values({1, 2, 3, 4, 5, 6, 7, 8}), 1.5).empty());
    CHECK(iqr_flags(CurveData::from_values({1, 2, 3, 4, 5, 6, 7, 8, 9, 100}), 1.5) == std::vector<std::size_t>{9});
    CHECK(iqr_flags(CurveData::from_optional({1.0, std::nullopt, 2.0, 3.0, 4.0, -50.0}), 1.5) ==
          std::vector<std::size_t>{5});
    CHECK_THROWS_AS((void)iqr_flags(CurveData::from_values({1, 2, 3}), 1.5), Error);
}

TEST_CASE("brush select with closed bounds") {
    WellDataset ds("W", {1, 2, 3, 4});
    ds.put_curve("X", CurveData::from_optional({0.0, 1.0, 2.0, std::nullopt}));
    ds.put_curve("Y", CurveData::from_values({0, 1, 2, 1}));
    const auto s = brush_select(ds, {"X", "Y", 1.0, 2.0, 0.0, 1.0});
    CHECK(s.rows == std::vector<std::size_t>{1});
    CHECK(s.provenance == Provenance::Brush);
    CHECK_THROWS_AS((void)brush_select(ds, {"X", "Y", 2.0, 1.0, 0.0, 1.0}), Error);
    CHECK_THROWS_AS((void)brush_select(ds, {"X", "Y", NAN, 1.0, 0.0, 1.0}), Error);
}

TEST_CASE("brush select matches the scan oracle") {
    std::mt19937_64 rng(17);
    WellDataset ds("W", [] {
        std::vector<double> d(2000);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<double>(i);
        return d;
    }());
    ds.put_curve("X", test::random_curve(rng, 2000, 0.05));
    ds.put_curve("Y", test::random_curve(rng, 2000, 0.05));
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 30; ++i) {
        double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        if (a > b) std::swap(a, b);
        if (c > d) std::swap(c, d);
        CHECK(brush_select(ds, {"X", "Y", a, b, c, d}).rows ==
              test::oracle_brush(ds.curve("X"), ds.curve("Y"), a, b, c, d));
    }
}

TEST_CASE("set combinations") {
    SelectionSet a{"a", "W", {1, 2, 3}, Provenance::Brush, ""};
    SelectionSet b{"b", "W", {3, 4}, Provenance::ZScore, ""};
    CHECK(combine(a, b, SetOp::Union).rows == std::vector<std::size_t>{1, 2, 3, 4});
    CHECK(combine(a, b, SetOp::Intersect).rows == std::vector<std::size_t>{3});
    CHECK(combine(a, b, SetOp::Difference).rows == std::vector<std::size_t>{1, 2});
    CHECK(combine(a, b, SetOp::Union).provenance == Provenance::Manual);
    SelectionSet other{"c", "V", {1}, Provenance::Manual, ""};
    CHECK_THROWS_AS((void)combine(a, other, SetOp::Union), Error);
}

TEST_CASE("filtered histogram") {
    std::vector<double> v;
    for (int i = 0; i < 10; ++i) v.push_back(i);
    const auto c = CurveData::from_values(v);
    const auto h = eda::histogram(c, 5);
    const std::vector<std::size_t> evens{0, 2, 4, 6, 8};
    CHECK(filtered_histogram(c, evens, h.edges) == std::vector<std::size_t>{1, 1, 1, 1, 1});
    std::vector<std::size_t> all(10);
    for (std::size_t i = 0; i < 10; ++i) all[i] = i;
    CHECK(filtered_histogram(c, all, h.edges) == h.counts);
    CHECK(filtered_histogram(c, {}, h.edges) == std::vector<std::size_t>(5, 0));
    const std::vector<std::size_t> bad{10};
    CHECK_THROWS_AS((void)filtered_histogram(c, bad, h.edges), Error);
    const std::vector<double> not_increasing{0, 0};
    CHECK_THROWS_AS((void)filtered_histogram(c, evens, not_increasing), Error);
}

TEST_CASE("apply_removal mask and drop") {
    const auto ds = spike_well();
    SelectionSet sel{"s", "SPIKE", {4}, Provenance::ZScore, ""};

    const auto masked = apply_removal(ds, sel, RemovalMode::Mask, {"GR"});
    CHECK(masked.report.rows_affected == 1);
    CHECK(masked.report.cells_masked == 1);
    CHECK(masked.dataset.curve("GR").is_missing(4));
    CHECK_FALSE(masked.dataset.curve("RHOB").is_missing(4));
    CHECK(masked.dataset.row_count() == 5);

    // masking again only counts newly masked cells
    const auto again = apply_removal(masked.dataset, sel, RemovalMode::Mask);
    CHECK(again.report.cells_masked == 1);

    const auto dropped = apply_removal(ds, sel, RemovalMode::Drop);
    CHECK(dropped.dataset.row_count() == 4);
    CHECK(dropped.report.rows_affected == 1);
    CHECK(dropped.dataset.depth() == std::vector<double>{1, 2, 3, 4});

    SelectionSet wrong{"s", "ELSEWHERE", {0}, Provenance::Manual, ""};
    CHECK_THROWS_AS((void)apply_removal(ds, wrong, RemovalMode::Mask), Error);
}

TEST_CASE("normalize_rows and provenance names") {
    CHECK(normalize_rows({3, 1, 3, 0}, 4) == std::vector<std::size_t>{0, 1, 3});
    CHECK_THROWS_AS((void)normalize_rows({4}, 4), Error);
    for (auto p : {Provenance::Brush, Provenance::ZScore, Provenance::Iqr, Provenance::Manual}) {
        CHECK(parse_provenance(provenance_name(p)) == p);
    }
    CHECK_THROWS_AS((void)parse_provenance("nope"), Error);
}
