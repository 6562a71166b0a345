#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlogs/dataset.hpp"

namespace mlogs::outliers {

enum class Provenance { Brush, ZScore, Iqr, Manual };

[[nodiscard]] std::string_view provenance_name(Provenance p) noexcept;
[[nodiscard]] Provenance parse_provenance(std::string_view s);

/// Flagged rows of one well. `rows` is sorted ascending without duplicates.
struct SelectionSet {
    std::string id;
    std::string well;
    std::vector<std::size_t> rows;
    Provenance provenance = Provenance::Manual;
    std::string created_from;

    bool operator==(const SelectionSet&) const = default;
};

struct BrushRect {
    std::string x_curve;
    std::string y_curve;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double y_lo = 0.0;
    double y_hi = 0.0;
};

enum class SetOp { Union, Intersect, Difference };
enum class RemovalMode { Mask, Drop };

struct RemovalReport {
    std::size_t rows_affected = 0;
    std::size_t cells_masked = 0;
};

struct RemovalResult {
    WellDataset dataset;
    RemovalReport report;
};

/// Rows whose |x - mean| / sample_std exceeds `threshold`. Empty when std is 0.
[[nodiscard]] std::vector<std::size_t> zscore_flags(const CurveData& values, double threshold = 3.0);

/// Rows outside the Tukey fences [q1 - k*IQR, q3 + k*IQR].
[[nodiscard]] std::vector<std::size_t> iqr_flags(const CurveData& values, double k = 1.5);

/// Rows with both coordinates present and inside the closed rectangle.
[[nodiscard]] SelectionSet brush_select(const WellDataset& ds, const BrushRect& rect);

[[nodiscard]] SelectionSet combine(const SelectionSet& a, const SelectionSet& b, SetOp op);

/// Counts of the selected, non-missing rows binned with existing histogram edges.
[[nodiscard]] std::vector<std::size_t> filtered_histogram(const CurveData& values, std::span<const std::size_t> selection,
                                                          const std::vector<double>& edges);

/// Masks (cells become missing) or drops the selected rows. An empty
/// `curves` list means every curve.
[[nodiscard]] RemovalResult apply_removal(const WellDataset& ds, const SelectionSet& selection, RemovalMode mode,
                                          const std::vector<std::string>& curves = {});

/// Sorts and deduplicates, checking every index against `row_count`.
[[nodiscard]] std::vector<std::size_t> normalize_rows(std::vector<std::size_t> rows, std::size_t row_count);

}  // namespace mlogs::outliers
