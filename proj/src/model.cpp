#include "mlogs/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlogs/error.hpp"

namespace mlogs::model {

namespace {

double standardize(double x, double mean, double sd) { return (x - mean) / sd; }

// In-place Cholesky factorization of a symmetric positive definite matrix
// (row-major, n x n). The lower triangle receives L.
void cholesky(std::vector<double>& g, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = g[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= g[j * n + k] * g[j * n + k];
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw Error(ErrorCode::SingularSystem, "normal equations are singular even with ridge regularization");
        }
        const double ljj = std::sqrt(d);
        g[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = g[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= g[i * n + k] * g[j * n + k];
            g[i * n + j] = s / ljj;
        }
    }
}

std::vector<double> cholesky_solve(const std::vector<double>& l, std::size_t n, std::vector<double> b) {
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
        b[i] = s / l[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
        b[i] = s / l[i * n + i];
    }
    return b;
}

double knn_predict_one(const TrainedModel& m, std::span<const double> query, std::vector<std::size_t>& order,
                       std::vector<double>& dist) {
    const std::size_t p = m.feature_names.size();
    const std::size_t n = m.train_targets.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            const double d = m.train_rows[i * p + j] - query[j];
            s += d * d;
        }
        dist[i] = s;
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto k = static_cast<std::size_t>(m.k);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += m.train_targets[order[i]];
    const double mean = sum / static_cast<double>(k);
    if (m.kind == ModelKind::KnnClassify) return mean >= 0.5 ? 1.0 : 0.0;
    return mean;
}

}  // namespace

std::string_view kind_name(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::KnnRegress: return "knn_regress";
        case ModelKind::LinearRegress: return "linear_regress";
        case ModelKind::KnnClassify: return "knn_classify";
    }
    return "knn_regress";
}

ModelKind parse_kind(std::string_view s) {
    if (s == "knn_regress" || s == "knn") return ModelKind::KnnRegress;
    if (s == "linear_regress" || s == "linear") return ModelKind::LinearRegress;
    if (s == "knn_classify") return ModelKind::KnnClassify;
    throw Error(ErrorCode::InvalidArgument, "unknown model kind '" + std::string(s) + "'");
}

bool is_classifier(ModelKind kind) noexcept { return kind == ModelKind::KnnClassify; }

std::string pred_curve_name(const std::string& target) { return target + kPredSuffix; }

MatrixData build_matrix(const MultiWellTable& table, const std::vector<std::string>& features,
                        const std::string& target, const Standardization* stats) {
    if (features.empty()) throw Error(ErrorCode::InvalidArgument, "no feature columns given");
    if (std::find(features.begin(), features.end(), target) != features.end()) {
        fail_on_curve(ErrorCode::InvalidArgument, target, "target '" + target + "' is also listed as a feature");
    }
    std::vector<std::size_t> cols;
    for (const auto& f : features) {
        auto idx = table.column_index(f);
        if (!idx) fail_on_curve(ErrorCode::UnknownColumn, f, "unknown column '" + f + "'");
        cols.push_back(*idx);
    }
    const auto target_idx = table.column_index(target);
    if (!target_idx) fail_on_curve(ErrorCode::UnknownColumn, target, "unknown column '" + target + "'");
    if (stats != nullptr && (stats->means.size() != features.size() || stats->stds.size() != features.size())) {
        throw Error(ErrorCode::LengthMismatch, "standardization statistics do not match the feature list");
    }

    const std::size_t p = features.size();
    MatrixData out;
    out.matrix.feature_names = features;
    for (const auto& row : table.rows) {
        if (!row.values[*target_idx]) continue;
        const bool complete = std::all_of(cols.begin(), cols.end(), [&](std::size_t c) { return row.values[c].has_value(); });
        if (!complete) continue;
        for (std::size_t c : cols) out.matrix.values.push_back(*row.values[c]);
        out.matrix.row_keys.push_back({row.well, row.row_index});
        out.target.push_back(*row.values[*target_idx]);
    }
    const std::size_t n = out.matrix.row_keys.size();
    if (n == 0) throw Error(ErrorCode::NoCompleteRows, "no row has every feature and the target present");

    if (stats != nullptr) {
        out.matrix.stats = *stats;
    } else {
        out.matrix.stats.means.assign(p, 0.0);
        out.matrix.stats.stds.assign(p, 0.0);
        for (std::size_t j = 0; j < p; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += out.matrix.values[i * p + j];
            const double mean = sum / static_cast<double>(n);
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = out.matrix.values[i * p + j] - mean;
                ss += d * d;
            }
            const double sd = n >= 2 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
            if (!(sd > 0.0)) {
                fail_on_curve(ErrorCode::ConstantFeature, features[j], "feature '" + features[j] + "' is constant");
            }
            out.matrix.stats.means[j] = mean;
            out.matrix.stats.stds[j] = sd;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            double& v = out.matrix.values[i * p + j];
            v = standardize(v, out.matrix.stats.means[j], out.matrix.stats.stds[j]);
        }
    }
    return out;
}

std::vector<double> solve_least_squares(std::span<const double> a, std::size_t rows, std::size_t cols,
                                        std::span<const double> b, double ridge) {
    if (a.size() != rows * cols || b.size() != rows) {
        throw Error(ErrorCode::LengthMismatch, "least-squares system dimensions disagree");
    }
    std::vector<double> gram(cols * cols, 0.0);
    std::vector<double> rhs(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* ar = a.data() + r * cols;
        for (std::size_t i = 0; i < cols; ++i) {
            rhs[i] += ar[i] * b[r];
            for (std::size_t j = 0; j <= i; ++j) gram[i * cols + j] += ar[i] * ar[j];
        }
    }
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = 0; j < i; ++j) gram[j * cols + i] = gram[i * cols + j];
    }

    std::vector<double> factor = gram;
    for (std::size_t i = 0; i < cols; ++i) factor[i * cols + i] += ridge;
    cholesky(factor, cols);

    std::vector<double> x = cholesky_solve(factor, cols, rhs);
    // Iterative refinement against the unregularized system strips the
    // ridge bias down to O(ridge^2).
    for (int iter = 0; iter < 3; ++iter) {
        std::vector<double> resid = rhs;
        for (std::size_t i = 0; i < cols; ++i) {
            for (std::size_t j = 0; j < cols; ++j) resid[i] -= gram[i * cols + j] * x[j];
        }
        const std::vector<double> dx = cholesky_solve(factor, cols, std::move(resid));
        for (std::size_t i = 0; i < cols; ++i) x[i] += dx[i];
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw Error(ErrorCode::SingularSystem, "least-squares solution is not finite");
    }
    return x;
}

TrainedModel train(const FeatureMatrix& matrix, std::span<const double> target, const TrainSpec& spec,
                   const std::string& target_name) {
    const std::size_t n = matrix.rows();
    const std::size_t p = matrix.cols();
    if (p == 0) throw Error(ErrorCode::InvalidArgument, "model needs at least one feature");
    if (target.size() != n) throw Error(ErrorCode::LengthMismatch, "target length differs from matrix rows");

    TrainedModel m;
    m.kind = spec.kind;
    m.feature_names = matrix.feature_names;
    m.target_name = target_name;
    m.stats = matrix.stats;

    if (spec.kind == ModelKind::LinearRegress) {
        m.k = 0;
        if (n < p + 1) {
            throw Error(ErrorCode::TooFewRows, "linear model with " + std::to_string(p) + " features needs at least " +
                                                   std::to_string(p + 1) + " rows, got " + std::to_string(n));
        }
        std::vector<double> design(n * (p + 1));
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = matrix.row(i);
            std::copy(r.begin(), r.end(), design.begin() + static_cast<std::ptrdiff_t>(i * (p + 1)));
            design[i * (p + 1) + p] = 1.0;
        }
        m.coefficients = solve_least_squares(design, n, p + 1, target);
        return m;
    }

    if (spec.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
    if (n < static_cast<std::size_t>(spec.k)) {
        throw Error(ErrorCode::TooFewRows,
                    "k = " + std::to_string(spec.k) + " exceeds the " + std::to_string(n) + " training rows");
    }
    if (spec.kind == ModelKind::KnnClassify) {
        for (double t : target) {
            if (t != 0.0 && t != 1.0) {
                throw Error(ErrorCode::NonBinaryTarget, "classification target must be 0/1, found " + std::to_string(t),
                            ErrorLocation{std::nullopt, target_name});
            }
        }
    }
    m.k = spec.k;
    m.train_rows = matrix.values;
    m.train_targets.assign(target.begin(), target.end());
    return m;
}

std::vector<double> predict_rows(const TrainedModel& model, const FeatureMatrix& matrix) {
    if (matrix.feature_names != model.feature_names) {
        throw Error(ErrorCode::InvalidArgument, "matrix features differ from the model's features");
    }
    const std::size_t p = model.feature_names.size();
    std::vector<double> out(matrix.rows());
    if (model.kind == ModelKind::LinearRegress) {
        for (std::size_t i = 0; i < matrix.rows(); ++i) {
            const auto r = matrix.row(i);
            double y = model.coefficients[p];
            for (std::size_t j = 0; j < p; ++j) y += model.coefficients[j] * r[j];
            out[i] = y;
        }
        return out;
    }
    std::vector<std::size_t> order(model.train_targets.size());
    std::vector<double> dist(model.train_targets.size());
    for (std::size_t i = 0; i < matrix.rows(); ++i) out[i] = knn_predict_one(model, matrix.row(i), order, dist);
    return out;
}

WellDataset predict(const TrainedModel& model, const WellDataset& ds) {
    std::vector<const CurveData*> cols;
    for (const auto& f : model.feature_names) {
        if (!ds.has_curve(f)) {
            fail_on_curve(ErrorCode::MissingFeatureCurve, f,
                          "well '" + ds.well() + "' lacks feature curve '" + f + "'");
        }
        cols.push_back(&ds.curve(f));
    }
    const std::size_t p = cols.size();

    FeatureMatrix query;
    query.feature_names = model.feature_names;
    query.stats = model.stats;
    std::vector<std::size_t> complete;
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
        const bool ok = std::none_of(cols.begin(), cols.end(), [&](const CurveData* c) { return c->is_missing(r); });
        if (!ok) continue;
        complete.push_back(r);
        for (std::size_t j = 0; j < p; ++j) {
            query.values.push_back(standardize(cols[j]->values[r], model.stats.means[j], model.stats.stds[j]));
        }
        query.row_keys.push_back({ds.well(), r});
    }
    const std::vector<double> preds = predict_rows(model, query);

    std::vector<std::optional<double>> cells(ds.row_count());
    for (std::size_t i = 0; i < complete.size(); ++i) cells[complete[i]] = preds[i];
    const std::string unit = ds.has_curve(model.target_name) ? ds.curve(model.target_name).unit : std::string{};

    WellDataset out = ds;
    out.put_curve(pred_curve_name(model.target_name), CurveData::from_optional(cells, unit));
    return out;
}

Metrics evaluate(const TrainedModel& model, const FeatureMatrix& matrix, std::span<const double> target) {
    if (matrix.rows() == 0) throw Error(ErrorCode::EmptyEvaluation, "no rows to evaluate");
    if (target.size() != matrix.rows()) throw Error(ErrorCode::LengthMismatch, "target length differs from matrix rows");
    if (!(matrix.stats == model.stats)) {
        throw Error(ErrorCode::InvalidArgument, "evaluation matrix must be standardized with the model's statistics");
    }
    const std::vector<double> pred = predict_rows(model, matrix);
    const std::size_t n = pred.size();

    Metrics m;
    m.n = n;
    m.classification = is_classifier(model.kind);
    if (m.classification) {
        for (std::size_t i = 0; i < n; ++i) {
            const bool p = pred[i] >= 0.5;
            const bool a = target[i] >= 0.5;
            if (p && a) ++m.true_pos;
            else if (p && !a) ++m.false_pos;
            else if (!p && a) ++m.false_neg;
            else ++m.true_neg;
        }
        m.accuracy = static_cast<double>(m.true_pos + m.true_neg) / static_cast<double>(n);
        const std::size_t pp = m.true_pos + m.false_pos;
        const std::size_t ap = m.true_pos + m.false_neg;
        m.precision = pp == 0 ? 0.0 : static_cast<double>(m.true_pos) / static_cast<double>(pp);
        m.recall = ap == 0 ? 0.0 : static_cast<double>(m.true_pos) / static_cast<double>(ap);
        m.f1 = (m.precision + m.recall) == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
        return m;
    }

    double sse = 0.0;
    double sae = 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += target[i];
    mean /= static_cast<double>(n);
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = target[i] - pred[i];
        sse += e * e;
        sae += std::abs(e);
        sst += (target[i] - mean) * (target[i] - mean);
    }
    m.rmse = std::sqrt(sse / static_cast<double>(n));
    m.mae = sae / static_cast<double>(n);
    if (sst > 0.0) m.r2 = 1.0 - sse / sst;
    return m;
}

SplitResult depth_block_split(const FeatureMatrix& matrix, std::span<const double> target, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "train fraction must lie strictly between 0 and 1");
    }
    if (target.size() != matrix.rows()) throw Error(ErrorCode::LengthMismatch, "target length differs from matrix rows");
    if (matrix.rows() < 2) throw Error(ErrorCode::TooFewRows, "split needs at least two rows");

    std::vector<std::string> wells;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const auto& w = matrix.row_keys[i].well;
        auto it = std::find(wells.begin(), wells.end(), w);
        if (it == wells.end()) {
            wells.push_back(w);
            groups.emplace_back();
            it = wells.end() - 1;
        }
        groups[static_cast<std::size_t>(it - wells.begin())].push_back(i);
    }

    SplitResult out;
    for (auto* side : {&out.train, &out.test}) {
        side->matrix.feature_names = matrix.feature_names;
        side->matrix.stats = matrix.stats;
    }
    auto take = [&](MatrixData& side, std::size_t i) {
        const auto r = matrix.row(i);
        side.matrix.values.insert(side.matrix.values.end(), r.begin(), r.end());
        side.matrix.row_keys.push_back(matrix.row_keys[i]);
        side.target.push_back(target[i]);
    };
    for (auto& g : groups) {
        std::stable_sort(g.begin(), g.end(), [&](std::size_t a, std::size_t b) {
            return matrix.row_keys[a].row_index < matrix.row_keys[b].row_index;
        });
        // the epsilon keeps 0.8 * 10 from rounding up to 9
        const double raw = train_fraction * static_cast<double>(g.size());
        const auto n_train = std::min(g.size(), static_cast<std::size_t>(std::ceil(raw - 1e-9)));
        for (std::size_t i = 0; i < g.size(); ++i) take(i < n_train ? out.train : out.test, g[i]);
    }
    if (out.train.matrix.rows() == 0 || out.test.matrix.rows() == 0) {
        throw Error(ErrorCode::TooFewRows, "depth-block split leaves the train or test side empty");
    }
    return out;
}

}  // namespace mlogs::model
