#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mlogs {

/// One log curve sampled on the dataset depth grid. Cells flagged in
/// `missing` hold NaN and are ignored by every statistic.
struct CurveData {
    std::vector<double> values;
    std::vector<bool> missing;
    std::string unit;

    CurveData() = default;
    CurveData(std::vector<double> v, std::vector<bool> m, std::string u = {});

    /// Builds a curve from optional cells; nullopt becomes missing.
    static CurveData from_optional(const std::vector<std::optional<double>>& cells, std::string unit = {});
    /// Builds a fully present curve.
    static CurveData from_values(std::vector<double> v, std::string unit = {});

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] bool is_missing(std::size_t i) const { return missing[i]; }
    [[nodiscard]] std::size_t present_count() const;
    [[nodiscard]] std::optional<double> at(std::size_t i) const;
    /// Non-missing values in row order.
    [[nodiscard]] std::vector<double> present_values() const;

    void set_missing(std::size_t i);
    void set_value(std::size_t i, double v);

    /// Equal masks, equal units, and bit-equal values at present cells.
    bool operator==(const CurveData& other) const;
};

struct NamedCurve {
    std::string name;
    CurveData data;

    bool operator==(const NamedCurve&) const = default;
};

/// Well header entry carried through from the source file (COMP, FLD, ...).
struct MetaEntry {
    std::string mnemonic;
    std::string unit;
    std::string value;
    std::string description;

    bool operator==(const MetaEntry&) const = default;
};

/// Depth-indexed table of named curves for one well. Depth is strictly
/// increasing and finite; every curve has one cell per depth sample.
class WellDataset {
public:
    WellDataset() = default;
    WellDataset(std::string well, std::vector<double> depth, std::string depth_unit = {},
                std::string depth_name = "DEPT");

    [[nodiscard]] const std::string& well() const noexcept { return well_; }
    void set_well(std::string name) { well_ = std::move(name); }

    [[nodiscard]] const std::vector<double>& depth() const noexcept { return depth_; }
    [[nodiscard]] const std::string& depth_unit() const noexcept { return depth_unit_; }
    [[nodiscard]] const std::string& depth_name() const noexcept { return depth_name_; }
    [[nodiscard]] std::size_t row_count() const noexcept { return depth_.size(); }

    [[nodiscard]] const std::vector<NamedCurve>& curves() const noexcept { return curves_; }
    [[nodiscard]] std::vector<std::string> curve_names() const;
    [[nodiscard]] bool has_curve(const std::string& name) const;
    /// Throws UnknownCurve.
    [[nodiscard]] const CurveData& curve(const std::string& name) const;
    [[nodiscard]] CurveData& curve_mut(const std::string& name);
    [[nodiscard]] std::optional<std::size_t> curve_position(const std::string& name) const;

    /// Appends a curve, or replaces the cells of an existing curve of the same name.
    void put_curve(const std::string& name, CurveData data);
    void remove_curve(const std::string& name);

    [[nodiscard]] const std::vector<MetaEntry>& metadata() const noexcept { return metadata_; }
    void set_metadata(std::vector<MetaEntry> meta) { metadata_ = std::move(meta); }

    /// Checks the class invariants; throws InvalidArgument / NonMonotoneDepth.
    void validate() const;

    bool operator==(const WellDataset&) const = default;

private:
    friend WellDataset select_rows(const WellDataset&, std::span<const std::size_t>);
    friend WellDataset select_curves(const WellDataset&, const std::vector<std::string>&);
    friend WellDataset rename_curve(const WellDataset&, const std::string&, const std::string&);

    std::string well_;
    std::vector<double> depth_;
    std::string depth_unit_;
    std::string depth_name_ = "DEPT";
    std::vector<NamedCurve> curves_;
    std::vector<MetaEntry> metadata_;
};

struct StatSummary {
    std::size_t count = 0;
    double mean = 0.0;
    std::optional<double> std;  // sample std, absent for count < 2
    double min = 0.0;
    double p25 = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
    double max = 0.0;
};

struct LimitResult {
    WellDataset dataset;
    std::size_t newly_masked = 0;
};

/// Long-format multi-well table: columns WELL, DEPT, then `curve_names`.
struct MultiWellRow {
    std::string well;
    double depth = 0.0;
    std::size_t row_index = 0;  // row in the source dataset
    std::vector<std::optional<double>> values;

    bool operator==(const MultiWellRow&) const = default;
};

struct MultiWellTable {
    std::vector<std::string> curve_names;
    std::vector<MultiWellRow> rows;

    [[nodiscard]] std::vector<std::string> columns() const;
    [[nodiscard]] std::optional<std::size_t> column_index(const std::string& curve) const;

    bool operator==(const MultiWellTable&) const = default;
};

/// Valid curve mnemonic: non-empty, no whitespace, no dots.
[[nodiscard]] bool is_valid_mnemonic(const std::string& name);

/// Quantile of already sorted data, linear interpolation at position (n-1)*q.
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double q);

struct Fences {
    double q1 = 0.0;
    double q3 = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Tukey fences [q1 - k*IQR, q3 + k*IQR] of already sorted data.
[[nodiscard]] Fences tukey_fences(std::span<const double> sorted, double k);

[[nodiscard]] WellDataset rename_curve(const WellDataset& ds, const std::string& old_name, const std::string& new_name);

/// Masks values outside the closed range [lo, hi].
[[nodiscard]] LimitResult apply_limits(const WellDataset& ds, const std::string& curve, double lo, double hi);

[[nodiscard]] WellDataset select_curves(const WellDataset& ds, const std::vector<std::string>& names);

/// Keeps only the listed rows (sorted ascending, unique) of depth and all curves.
[[nodiscard]] WellDataset select_rows(const WellDataset& ds, std::span<const std::size_t> rows);

[[nodiscard]] StatSummary summary_stats(const WellDataset& ds, const std::string& curve);
[[nodiscard]] StatSummary summary_stats(const CurveData& values);

/// Stacks datasets into long format. Duplicate well names are tagged
/// NAME, NAME_2, NAME_3, ... in input order.
[[nodiscard]] MultiWellTable concat_wells(const std::vector<WellDataset>& datasets,
                                          const std::vector<std::string>& curves);

/// Curve names across datasets in order of first appearance.
[[nodiscard]] std::vector<std::string> curve_union(const std::vector<WellDataset>& datasets);

}  // namespace mlogs
