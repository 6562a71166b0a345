#include "mlogs/outliers.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include "mlogs/eda.hpp"
#include "mlogs/error.hpp"
#include "mlogs/las_io.hpp"

namespace mlogs::outliers {

std::string_view provenance_name(Provenance p) noexcept {
    switch (p) {
        case Provenance::Brush: return "brush";
        case Provenance::ZScore: return "zscore";
        case Provenance::Iqr: return "iqr";
        case Provenance::Manual: return "manual";
    }
    return "manual";
}

Provenance parse_provenance(std::string_view s) {
    if (s == "brush") return Provenance::Brush;
    if (s == "zscore") return Provenance::ZScore;
    if (s == "iqr") return Provenance::Iqr;
    if (s == "manual") return Provenance::Manual;
    throw Error(ErrorCode::InvalidArgument, "unknown provenance '" + std::string(s) + "'");
}

std::vector<std::size_t> zscore_flags(const CurveData& values, double threshold) {
    if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "z-score threshold must be positive");
    const std::size_t n = values.present_count();
    if (n == 0) throw Error(ErrorCode::AllMissing, "z-score of an all-missing curve");
    if (n < 2) throw Error(ErrorCode::TooFewValues, "z-score needs at least two values");

    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values.is_missing(i)) sum += values.values[i];
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values.is_missing(i)) ss += (values.values[i] - mean) * (values.values[i] - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    std::vector<std::size_t> flags;
    if (sd == 0.0) return flags;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values.is_missing(i)) continue;
        if (std::abs(values.values[i] - mean) / sd > threshold) flags.push_back(i);
    }
    return flags;
}

std::vector<std::size_t> iqr_flags(const CurveData& values, double k) {
    if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "IQR multiplier must be positive");
    std::vector<double> sorted = values.present_values();
    if (sorted.size() < 4) throw Error(ErrorCode::TooFewValues, "IQR fences need at least four values");
    std::sort(sorted.begin(), sorted.end());
    const Fences f = tukey_fences(sorted, k);

    std::vector<std::size_t> flags;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values.is_missing(i)) continue;
        const double v = values.values[i];
        if (v < f.lo || v > f.hi) flags.push_back(i);
    }
    return flags;
}

SelectionSet brush_select(const WellDataset& ds, const BrushRect& rect) {
    if (!std::isfinite(rect.x_lo) || !std::isfinite(rect.x_hi) || !std::isfinite(rect.y_lo) ||
        !std::isfinite(rect.y_hi) || rect.x_lo > rect.x_hi || rect.y_lo > rect.y_hi) {
        throw Error(ErrorCode::InvalidRange, "brush bounds must be finite with lo <= hi");
    }
    const CurveData& x = ds.curve(rect.x_curve);
    const CurveData& y = ds.curve(rect.y_curve);

    SelectionSet sel;
    sel.well = ds.well();
    sel.provenance = Provenance::Brush;
    std::ostringstream desc;
    desc << rect.x_curve << " in [" << las::format_number(rect.x_lo) << ", " << las::format_number(rect.x_hi) << "], "
         << rect.y_curve << " in [" << las::format_number(rect.y_lo) << ", " << las::format_number(rect.y_hi) << "]";
    sel.created_from = desc.str();
    for (std::size_t i = 0; i < ds.row_count(); ++i) {
        if (x.is_missing(i) || y.is_missing(i)) continue;
        const double xv = x.values[i];
        const double yv = y.values[i];
        if (xv >= rect.x_lo && xv <= rect.x_hi && yv >= rect.y_lo && yv <= rect.y_hi) sel.rows.push_back(i);
    }
    return sel;
}

SelectionSet combine(const SelectionSet& a, const SelectionSet& b, SetOp op) {
    if (a.well != b.well) {
        throw Error(ErrorCode::WellMismatch, "cannot combine selections of wells '" + a.well + "' and '" + b.well + "'");
    }
    SelectionSet out;
    out.well = a.well;
    out.provenance = Provenance::Manual;
    auto dst = std::back_inserter(out.rows);
    switch (op) {
        case SetOp::Union:
            std::set_union(a.rows.begin(), a.rows.end(), b.rows.begin(), b.rows.end(), dst);
            out.created_from = "union";
            break;
        case SetOp::Intersect:
            std::set_intersection(a.rows.begin(), a.rows.end(), b.rows.begin(), b.rows.end(), dst);
            out.created_from = "intersect";
            break;
        case SetOp::Difference:
            std::set_difference(a.rows.begin(), a.rows.end(), b.rows.begin(), b.rows.end(), dst);
            out.created_from = "difference";
            break;
    }
    if (!a.id.empty() || !b.id.empty()) out.created_from += "(" + a.id + ", " + b.id + ")";
    return out;
}

std::vector<std::size_t> filtered_histogram(const CurveData& values, std::span<const std::size_t> selection,
                                            const std::vector<double>& edges) {
    if (edges.size() < 2) throw Error(ErrorCode::EdgeMismatch, "histogram needs at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1])) throw Error(ErrorCode::EdgeMismatch, "histogram edges must be strictly increasing");
    }
    std::vector<std::size_t> counts(edges.size() - 1, 0);
    for (std::size_t r : selection) {
        if (r >= values.size()) {
            throw Error(ErrorCode::IndexOutOfRange, "selected row " + std::to_string(r) + " out of range");
        }
        if (values.is_missing(r)) continue;
        if (auto bin = eda::bin_index(edges, values.values[r])) ++counts[*bin];
    }
    return counts;
}

std::vector<std::size_t> normalize_rows(std::vector<std::size_t> rows, std::size_t row_count) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (!rows.empty() && rows.back() >= row_count) {
        throw Error(ErrorCode::IndexOutOfRange, "row " + std::to_string(rows.back()) + " out of range for " +
                                                    std::to_string(row_count) + " rows");
    }
    return rows;
}

RemovalResult apply_removal(const WellDataset& ds, const SelectionSet& selection, RemovalMode mode,
                            const std::vector<std::string>& curves) {
    if (selection.well != ds.well()) {
        throw Error(ErrorCode::WellMismatch,
                    "selection belongs to well '" + selection.well + "', dataset is '" + ds.well() + "'");
    }
    const std::vector<std::size_t> rows = normalize_rows(selection.rows, ds.row_count());

    RemovalResult result{ds, {rows.size(), 0}};
    if (mode == RemovalMode::Drop) {
        std::vector<std::size_t> keep;
        keep.reserve(ds.row_count() - rows.size());
        std::size_t next = 0;
        for (std::size_t r = 0; r < ds.row_count(); ++r) {
            if (next < rows.size() && rows[next] == r) {
                ++next;
                continue;
            }
            keep.push_back(r);
        }
        result.dataset = select_rows(ds, keep);
        return result;
    }

    const std::vector<std::string> targets = curves.empty() ? ds.curve_names() : curves;
    for (const auto& name : targets) {
        CurveData& c = result.dataset.curve_mut(name);
        for (std::size_t r : rows) {
            if (!c.is_missing(r)) {
                c.set_missing(r);
                ++result.report.cells_masked;
            }
        }
    }
    return result;
}

}  // namespace mlogs::outliers
