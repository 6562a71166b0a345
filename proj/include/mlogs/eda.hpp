#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mlogs/dataset.hpp"

// Chart payloads for the exploratory views. Numerics only; rendering lives
// in the front end.
namespace mlogs::eda {

inline constexpr int kDefaultBins = 40;
inline constexpr std::size_t kMaxPairCurves = 8;

struct Histogram {
    std::vector<double> edges;        // n+1, strictly increasing
    std::vector<std::size_t> counts;  // n
    std::size_t excluded_missing = 0;
};

struct ScatterPoint {
    std::size_t row_index = 0;
    double x = 0.0;
    double y = 0.0;

    bool operator==(const ScatterPoint&) const = default;
};

struct ScatterData {
    std::string x_name;
    std::string y_name;
    std::vector<ScatterPoint> points;
};

struct BoxStats {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_lo = 0.0;
    double whisker_hi = 0.0;
    std::vector<std::size_t> outlier_indices;
};

struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<std::optional<double>>> r;  // nullopt = undefined
    std::vector<std::vector<std::size_t>> n_pairs;
};

using PairCell = std::variant<ScatterData, Histogram>;

struct PairGrid {
    std::vector<std::string> names;
    std::vector<std::vector<PairCell>> cells;  // cells[i][j]
};

struct WellCount {
    std::string well;
    std::size_t rows = 0;

    bool operator==(const WellCount&) const = default;
};

/// Uniform bins over [min, max]; half-open except the last bin, which is closed.
[[nodiscard]] Histogram histogram(const CurveData& values, int bin_count = kDefaultBins);

/// Bin for `x` under the shared half-open/closed-last rule, or nullopt when
/// `x` lies outside [edges.front(), edges.back()].
[[nodiscard]] std::optional<std::size_t> bin_index(const std::vector<double>& edges, double x);

[[nodiscard]] ScatterData scatter_pairs(const WellDataset& ds, const std::string& x, const std::string& y);

/// Pearson r over pairwise-complete rows; nullopt when fewer than two pairs
/// or either side has zero variance.
[[nodiscard]] std::optional<double> pearson(const CurveData& x, const CurveData& y);

[[nodiscard]] CorrelationMatrix correlation_matrix(const WellDataset& ds, const std::vector<std::string>& names);

/// Tukey box plot: type-7 quartiles, 1.5*IQR whiskers clamped to data points.
[[nodiscard]] BoxStats box_stats(const CurveData& values);

/// Cell (i, j) with i != j is scatter_pairs(names[j], names[i]); diagonal cells are histograms.
[[nodiscard]] PairGrid pair_grid(const WellDataset& ds, const std::vector<std::string>& names,
                                 int bin_count = kDefaultBins);

/// Rows per well in first-appearance order.
[[nodiscard]] std::vector<WellCount> category_counts(const MultiWellTable& table);

}  // namespace mlogs::eda
