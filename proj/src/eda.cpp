#include "mlogs/eda.hpp"

#include <algorithm>
#include <cmath>

#include "mlogs/error.hpp"

namespace mlogs::eda {

std::optional<std::size_t> bin_index(const std::vector<double>& edges, double x) {
    if (edges.size() < 2 || !(x >= edges.front()) || x > edges.back()) return std::nullopt;
    if (x == edges.back()) return edges.size() - 2;
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    return static_cast<std::size_t>(it - edges.begin()) - 1;
}

Histogram histogram(const CurveData& values, int bin_count) {
    if (bin_count < 1) throw Error(ErrorCode::InvalidArgument, "bin count must be at least 1");
    const std::vector<double> present = values.present_values();
    if (present.empty()) throw Error(ErrorCode::AllMissing, "histogram of an all-missing curve");

    const auto [mn_it, mx_it] = std::minmax_element(present.begin(), present.end());
    const double lo = *mn_it;
    const double hi = *mx_it;

    Histogram h;
    h.excluded_missing = values.size() - present.size();
    if (lo == hi) {
        h.edges = {lo, lo + 1.0};
        h.counts = {present.size()};
        return h;
    }
    const auto n = static_cast<std::size_t>(bin_count);
    h.edges.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    }
    h.edges[n] = hi;
    h.counts.assign(n, 0);
    for (double v : present) ++h.counts[*bin_index(h.edges, v)];
    return h;
}

ScatterData scatter_pairs(const WellDataset& ds, const std::string& x, const std::string& y) {
    const CurveData& cx = ds.curve(x);
    const CurveData& cy = ds.curve(y);
    ScatterData out{x, y, {}};
    for (std::size_t i = 0; i < ds.row_count(); ++i) {
        if (cx.is_missing(i) || cy.is_missing(i)) continue;
        out.points.push_back({i, cx.values[i], cy.values[i]});
    }
    return out;
}

std::optional<double> pearson(const CurveData& x, const CurveData& y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::LengthMismatch, "pearson inputs differ in length");
    }
    std::size_t n = 0;
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.is_missing(i) || y.is_missing(i)) continue;
        sx += x.values[i];
        sy += y.values[i];
        ++n;
    }
    if (n < 2) return std::nullopt;
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.is_missing(i) || y.is_missing(i)) continue;
        const double dx = x.values[i] - mx;
        const double dy = y.values[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(const WellDataset& ds, const std::vector<std::string>& names) {
    if (names.size() < 2) throw Error(ErrorCode::MinimumTwo, "correlation needs at least two curves");
    std::vector<const CurveData*> cols;
    cols.reserve(names.size());
    for (const auto& n : names) cols.push_back(&ds.curve(n));

    const std::size_t k = names.size();
    CorrelationMatrix m;
    m.names = names;
    m.r.assign(k, std::vector<std::optional<double>>(k));
    m.n_pairs.assign(k, std::vector<std::size_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            std::size_t pairs = 0;
            for (std::size_t row = 0; row < ds.row_count(); ++row) {
                if (!cols[i]->is_missing(row) && !cols[j]->is_missing(row)) ++pairs;
            }
            const auto r = pearson(*cols[i], *cols[j]);
            m.r[i][j] = r;
            m.r[j][i] = r;
            m.n_pairs[i][j] = pairs;
            m.n_pairs[j][i] = pairs;
        }
    }
    return m;
}

BoxStats box_stats(const CurveData& values) {
    std::vector<double> sorted = values.present_values();
    if (sorted.empty()) throw Error(ErrorCode::AllMissing, "box plot of an all-missing curve");
    std::sort(sorted.begin(), sorted.end());

    const Fences f = tukey_fences(sorted, 1.5);
    BoxStats b;
    b.q1 = f.q1;
    b.q3 = f.q3;
    b.median = quantile_sorted(sorted, 0.5);
    // fences always bracket [q1, q3], so both searches find a data point
    b.whisker_lo = *std::lower_bound(sorted.begin(), sorted.end(), f.lo);
    b.whisker_hi = *(std::upper_bound(sorted.begin(), sorted.end(), f.hi) - 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values.is_missing(i)) continue;
        const double v = values.values[i];
        if (v < f.lo || v > f.hi) b.outlier_indices.push_back(i);
    }
    return b;
}

PairGrid pair_grid(const WellDataset& ds, const std::vector<std::string>& names, int bin_count) {
    if (names.size() < 2) throw Error(ErrorCode::MinimumTwo, "pair plot needs at least two curves");
    if (names.size() > kMaxPairCurves) {
        throw Error(ErrorCode::TooManyCurves,
                    "pair plot supports at most " + std::to_string(kMaxPairCurves) + " curves");
    }
    for (const auto& n : names) (void)ds.curve(n);

    PairGrid grid;
    grid.names = names;
    grid.cells.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        grid.cells[i].reserve(names.size());
        for (std::size_t j = 0; j < names.size(); ++j) {
            if (i == j) {
                grid.cells[i].emplace_back(histogram(ds.curve(names[i]), bin_count));
            } else {
                grid.cells[i].emplace_back(scatter_pairs(ds, names[j], names[i]));
            }
        }
    }
    return grid;
}

std::vector<WellCount> category_counts(const MultiWellTable& table) {
    std::vector<WellCount> out;
    for (const auto& row : table.rows) {
        auto it = std::find_if(out.begin(), out.end(), [&](const WellCount& c) { return c.well == row.well; });
        if (it == out.end()) out.push_back({row.well, 1});
        else ++it->rows;
    }
    return out;
}

}  // namespace mlogs::eda
