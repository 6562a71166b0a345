#pragma once

// Shared helpers for the unit and acceptance suites. Everything named
// `oracle_*` is an independent reference computation: it must not call
// into the code it checks.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mlogs/dataset.hpp"

namespace mlogs::test {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(MLOGS_FIXTURE_DIR) / name;
}

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture(name), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// LAS files expected to parse; the round-trip corpus.
inline std::vector<std::string> corpus() {
    return {"minimal.las",        "sample_v12.las",      "unwrapped_v20.las", "wrapped_v20.las",
            "wrapped_v12.las",    "sentinel_heavy.las",  "decreasing_depth.las", "duplicate_mnemonics.las",
            "outlier_spike.las"};
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "mlogs") {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                (tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Random masked vector: values ~ N(mean, sd) with a fraction missing.
inline CurveData random_curve(std::mt19937_64& rng, std::size_t n, double missing_fraction = 0.0,
                              double mean = 0.0, double sd = 1.0) {
    std::normal_distribution<double> dist(mean, sd);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::optional<double>> cells(n);
    for (auto& c : cells) {
        const double v = dist(rng);
        if (u(rng) >= missing_fraction) c = v;
    }
    return CurveData::from_optional(cells);
}

// ---------------------------------------------------------------------------
// oracles

/// Sort, then interpolate between the bracketing order statistics.
inline double oracle_quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * q;
    const double lo = std::floor(h);
    const double hi = std::ceil(h);
    const double a = v[static_cast<std::size_t>(lo)];
    const double b = v[static_cast<std::size_t>(hi)];
    return a + (h - lo) * (b - a);
}

/// Pearson r over rows where both cells are present, straight from the
/// textbook definition. nullopt when undefined.
inline std::optional<double> oracle_pearson(const CurveData& x, const CurveData& y) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.missing[i] || y.missing[i]) continue;
        xs.push_back(x.values[i]);
        ys.push_back(y.values[i]);
    }
    if (xs.size() < 2) return std::nullopt;
    long double mx = 0;
    long double my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    long double cov = 0;
    long double vx = 0;
    long double vy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cov += (xs[i] - mx) * (ys[i] - my);
        vx += (xs[i] - mx) * (xs[i] - mx);
        vy += (ys[i] - my) * (ys[i] - my);
    }
    if (vx == 0 || vy == 0) return std::nullopt;
    return static_cast<double>(cov / std::sqrt(vx * vy));
}

/// Full scan point-in-rectangle with closed bounds.
inline std::vector<std::size_t> oracle_brush(const CurveData& x, const CurveData& y, double x_lo, double x_hi,
                                             double y_lo, double y_hi) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.missing[i] || y.missing[i]) continue;
        const bool inside = !(x.values[i] < x_lo) && !(x.values[i] > x_hi) && !(y.values[i] < y_lo) &&
                            !(y.values[i] > y_hi);
        if (inside) rows.push_back(i);
    }
    return rows;
}

/// Counts per bin by testing every value against every bin interval.
inline std::vector<std::size_t> oracle_bin_counts(const std::vector<double>& values, const std::vector<double>& edges) {
    std::vector<std::size_t> counts(edges.size() - 1, 0);
    for (double v : values) {
        for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
            const bool last = b + 2 == edges.size();
            if (v >= edges[b] && (v < edges[b + 1] || (last && v == edges[b + 1]))) {
                ++counts[b];
                break;
            }
        }
    }
    return counts;
}

/// Reads the ~A section of a LAS text as a flat token stream and cuts it
/// into rows of `ncols`. Knows nothing about WRAP or line structure.
inline std::vector<std::vector<double>> oracle_unwrap(const std::string& text, std::size_t ncols) {
    std::istringstream in(text);
    std::string line;
    bool in_data = false;
    std::vector<double> flat;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '~') {
            in_data = line.size() > first + 1 && (line[first + 1] == 'A' || line[first + 1] == 'a');
            continue;
        }
        if (!in_data || line[first] == '#') continue;
        std::istringstream tokens(line);
        double v;
        while (tokens >> v) flat.push_back(v);
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i + ncols <= flat.size(); i += ncols) {
        rows.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i),
                          flat.begin() + static_cast<std::ptrdiff_t>(i + ncols));
    }
    return rows;
}

/// Least-squares solution through the SVD pseudo-inverse.
inline std::vector<double> oracle_pinv_solve(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                                             const std::vector<double>& b) {
    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    Eigen::VectorXd B(static_cast<Eigen::Index>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i * cols + j];
        B(static_cast<Eigen::Index>(i)) = b[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd s = svd.singularValues();
    Eigen::VectorXd s_inv = s;
    const double tol = 1e-12 * s.maxCoeff();
    for (Eigen::Index i = 0; i < s.size(); ++i) s_inv(i) = s(i) > tol ? 1.0 / s(i) : 0.0;
    const Eigen::VectorXd x = svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose() * B;
    return {x.data(), x.data() + x.size()};
}

}  // namespace mlogs::test
