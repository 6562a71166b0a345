#include "mlogs/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mlogs/error.hpp"

namespace mlogs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

// ---------------------------------------------------------------------------
// CurveData

CurveData::CurveData(std::vector<double> v, std::vector<bool> m, std::string u)
    : values(std::move(v)), missing(std::move(m)), unit(std::move(u)) {
    if (values.size() != missing.size()) {
        throw Error(ErrorCode::LengthMismatch, "curve values and missing mask differ in length");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!missing[i] && !std::isfinite(values[i])) missing[i] = true;
        if (missing[i]) values[i] = kNaN;
    }
}

CurveData CurveData::from_optional(const std::vector<std::optional<double>>& cells, std::string unit) {
    std::vector<double> v(cells.size(), kNaN);
    std::vector<bool> m(cells.size(), true);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i]) {
            v[i] = *cells[i];
            m[i] = false;
        }
    }
    return CurveData(std::move(v), std::move(m), std::move(unit));
}

CurveData CurveData::from_values(std::vector<double> v, std::string unit) {
    std::vector<bool> m(v.size(), false);
    return CurveData(std::move(v), std::move(m), std::move(unit));
}

std::size_t CurveData::present_count() const {
    return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), false));
}

std::optional<double> CurveData::at(std::size_t i) const {
    if (missing[i]) return std::nullopt;
    return values[i];
}

std::vector<double> CurveData::present_values() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!missing[i]) out.push_back(values[i]);
    }
    return out;
}

void CurveData::set_missing(std::size_t i) {
    missing[i] = true;
    values[i] = kNaN;
}

void CurveData::set_value(std::size_t i, double v) {
    if (!std::isfinite(v)) {
        set_missing(i);
        return;
    }
    missing[i] = false;
    values[i] = v;
}

bool CurveData::operator==(const CurveData& other) const {
    if (unit != other.unit || missing != other.missing || values.size() != other.values.size()) return false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!missing[i] && values[i] != other.values[i]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// WellDataset

WellDataset::WellDataset(std::string well, std::vector<double> depth, std::string depth_unit,
                         std::string depth_name)
    : well_(std::move(well)),
      depth_(std::move(depth)),
      depth_unit_(std::move(depth_unit)),
      depth_name_(std::move(depth_name)) {
    validate();
}

std::vector<std::string> WellDataset::curve_names() const {
    std::vector<std::string> names;
    names.reserve(curves_.size());
    for (const auto& c : curves_) names.push_back(c.name);
    return names;
}

std::optional<std::size_t> WellDataset::curve_position(const std::string& name) const {
    for (std::size_t i = 0; i < curves_.size(); ++i) {
        if (curves_[i].name == name) return i;
    }
    return std::nullopt;
}

bool WellDataset::has_curve(const std::string& name) const { return curve_position(name).has_value(); }

const CurveData& WellDataset::curve(const std::string& name) const {
    auto pos = curve_position(name);
    if (!pos) fail_on_curve(ErrorCode::UnknownCurve, name, "unknown curve '" + name + "' in well '" + well_ + "'");
    return curves_[*pos].data;
}

CurveData& WellDataset::curve_mut(const std::string& name) {
    auto pos = curve_position(name);
    if (!pos) fail_on_curve(ErrorCode::UnknownCurve, name, "unknown curve '" + name + "' in well '" + well_ + "'");
    return curves_[*pos].data;
}

void WellDataset::put_curve(const std::string& name, CurveData data) {
    if (!is_valid_mnemonic(name)) fail_on_curve(ErrorCode::InvalidName, name, "invalid curve name '" + name + "'");
    if (data.size() != depth_.size()) {
        fail_on_curve(ErrorCode::LengthMismatch, name,
                      "curve '" + name + "' has " + std::to_string(data.size()) + " cells, expected " +
                          std::to_string(depth_.size()));
    }
    if (auto pos = curve_position(name)) {
        curves_[*pos].data = std::move(data);
    } else {
        curves_.push_back(NamedCurve{name, std::move(data)});
    }
}

void WellDataset::remove_curve(const std::string& name) {
    auto pos = curve_position(name);
    if (!pos) fail_on_curve(ErrorCode::UnknownCurve, name, "unknown curve '" + name + "'");
    curves_.erase(curves_.begin() + static_cast<std::ptrdiff_t>(*pos));
}

void WellDataset::validate() const {
    for (std::size_t i = 0; i < depth_.size(); ++i) {
        if (!std::isfinite(depth_[i])) {
            throw Error(ErrorCode::InvalidArgument, "depth sample " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(depth_[i] > depth_[i - 1])) {
            throw Error(ErrorCode::NonMonotoneDepth,
                        "depth not strictly increasing at sample " + std::to_string(i));
        }
    }
    for (const auto& c : curves_) {
        if (c.data.size() != depth_.size()) {
            fail_on_curve(ErrorCode::LengthMismatch, c.name, "curve '" + c.name + "' length differs from depth");
        }
    }
}

// ---------------------------------------------------------------------------
// MultiWellTable

std::vector<std::string> MultiWellTable::columns() const {
    std::vector<std::string> cols{"WELL", "DEPT"};
    cols.insert(cols.end(), curve_names.begin(), curve_names.end());
    return cols;
}

std::optional<std::size_t> MultiWellTable::column_index(const std::string& curve) const {
    auto it = std::find(curve_names.begin(), curve_names.end(), curve);
    if (it == curve_names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - curve_names.begin());
}

// ---------------------------------------------------------------------------
// free functions

bool is_valid_mnemonic(const std::string& name) {
    if (name.empty()) return false;
    return std::none_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isspace(c) != 0 || c == '.' || c == ':' || c == ',' || c == '"' || std::iscntrl(c) != 0;
    });
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw Error(ErrorCode::AllMissing, "quantile of empty data");
    const double pos = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Fences tukey_fences(std::span<const double> sorted, double k) {
    Fences f;
    f.q1 = quantile_sorted(sorted, 0.25);
    f.q3 = quantile_sorted(sorted, 0.75);
    const double iqr = f.q3 - f.q1;
    f.lo = f.q1 - k * iqr;
    f.hi = f.q3 + k * iqr;
    return f;
}

WellDataset rename_curve(const WellDataset& ds, const std::string& old_name, const std::string& new_name) {
    auto pos = ds.curve_position(old_name);
    if (!pos) fail_on_curve(ErrorCode::UnknownCurve, old_name, "unknown curve '" + old_name + "'");
    if (!is_valid_mnemonic(new_name)) {
        fail_on_curve(ErrorCode::InvalidName, new_name, "invalid curve name '" + new_name + "'");
    }
    WellDataset out = ds;
    if (old_name == new_name) return out;
    if (ds.has_curve(new_name)) {
        fail_on_curve(ErrorCode::NameCollision, new_name, "curve '" + new_name + "' already exists");
    }
    out.curves_[*pos].name = new_name;
    return out;
}

LimitResult apply_limits(const WellDataset& ds, const std::string& curve, double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
        fail_on_curve(ErrorCode::InvalidRange, curve, "invalid limits: lo must not exceed hi");
    }
    LimitResult result{ds, 0};
    CurveData& data = result.dataset.curve_mut(curve);
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.is_missing(i)) continue;
        const double v = data.values[i];
        if (v < lo || v > hi) {
            data.set_missing(i);
            ++result.newly_masked;
        }
    }
    return result;
}

WellDataset select_curves(const WellDataset& ds, const std::vector<std::string>& names) {
    WellDataset out = ds;
    out.curves_.clear();
    for (const auto& name : names) {
        if (out.has_curve(name)) {
            fail_on_curve(ErrorCode::NameCollision, name, "curve '" + name + "' requested twice");
        }
        out.curves_.push_back(NamedCurve{name, ds.curve(name)});
    }
    return out;
}

WellDataset select_rows(const WellDataset& ds, std::span<const std::size_t> rows) {
    WellDataset out = ds;
    out.depth_.clear();
    for (auto& c : out.curves_) {
        c.data.values.clear();
        c.data.missing.clear();
    }
    for (std::size_t r : rows) {
        if (r >= ds.row_count()) {
            throw Error(ErrorCode::IndexOutOfRange, "row " + std::to_string(r) + " out of range");
        }
        out.depth_.push_back(ds.depth_[r]);
        for (std::size_t c = 0; c < out.curves_.size(); ++c) {
            out.curves_[c].data.values.push_back(ds.curves_[c].data.values[r]);
            out.curves_[c].data.missing.push_back(ds.curves_[c].data.missing[r]);
        }
    }
    out.validate();
    return out;
}

StatSummary summary_stats(const CurveData& values) {
    std::vector<double> v = values.present_values();
    if (v.empty()) throw Error(ErrorCode::AllMissing, "no non-missing values");
    StatSummary s;
    s.count = v.size();
    const double n = static_cast<double>(v.size());
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() >= 2) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    s.p25 = quantile_sorted(v, 0.25);
    s.p50 = quantile_sorted(v, 0.50);
    s.p75 = quantile_sorted(v, 0.75);
    return s;
}

StatSummary summary_stats(const WellDataset& ds, const std::string& curve) {
    try {
        return summary_stats(ds.curve(curve));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::AllMissing) {
            fail_on_curve(ErrorCode::AllMissing, curve, "curve '" + curve + "' has no non-missing values");
        }
        throw;
    }
}

std::vector<std::string> curve_union(const std::vector<WellDataset>& datasets) {
    std::vector<std::string> names;
    for (const auto& ds : datasets) {
        for (const auto& c : ds.curves()) {
            if (std::find(names.begin(), names.end(), c.name) == names.end()) names.push_back(c.name);
        }
    }
    return names;
}

MultiWellTable concat_wells(const std::vector<WellDataset>& datasets, const std::vector<std::string>& curves) {
    if (datasets.empty()) throw Error(ErrorCode::EmptyDataset, "no datasets to concatenate");
    if (curves.empty()) throw Error(ErrorCode::InvalidArgument, "no curves requested");
    for (const auto& name : curves) {
        const bool found = std::any_of(datasets.begin(), datasets.end(),
                                       [&](const WellDataset& ds) { return ds.has_curve(name); });
        if (!found) fail_on_curve(ErrorCode::UnknownCurve, name, "curve '" + name + "' exists in no dataset");
    }

    MultiWellTable table;
    table.curve_names = curves;
    std::map<std::string, int> seen;
    for (const auto& ds : datasets) {
        int& n = seen[ds.well()];
        ++n;
        const std::string tag = n == 1 ? ds.well() : ds.well() + "_" + std::to_string(n);

        std::vector<const CurveData*> cols;
        cols.reserve(curves.size());
        for (const auto& name : curves) cols.push_back(ds.has_curve(name) ? &ds.curve(name) : nullptr);

        for (std::size_t r = 0; r < ds.row_count(); ++r) {
            MultiWellRow row{tag, ds.depth()[r], r, {}};
            row.values.reserve(cols.size());
            for (const CurveData* c : cols) row.values.push_back(c ? c->at(r) : std::nullopt);
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

}  // namespace mlogs
