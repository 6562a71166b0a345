#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlogs/dataset.hpp"

namespace mlogs::model {

inline constexpr int kDefaultK = 5;
inline constexpr double kRidge = 1e-8;
inline constexpr const char* kPredSuffix = "_PRED";

enum class ModelKind { KnnRegress, LinearRegress, KnnClassify };

[[nodiscard]] std::string_view kind_name(ModelKind kind) noexcept;
[[nodiscard]] ModelKind parse_kind(std::string_view s);
[[nodiscard]] bool is_classifier(ModelKind kind) noexcept;

struct RowKey {
    std::string well;
    std::size_t row_index = 0;

    bool operator==(const RowKey&) const = default;
};

struct Standardization {
    std::vector<double> means;
    std::vector<double> stds;

    bool operator==(const Standardization&) const = default;
};

/// Complete-case, standardized feature rows, stored row-major.
struct FeatureMatrix {
    std::vector<std::string> feature_names;
    std::vector<double> values;
    std::vector<RowKey> row_keys;
    Standardization stats;

    [[nodiscard]] std::size_t rows() const noexcept { return row_keys.size(); }
    [[nodiscard]] std::size_t cols() const noexcept { return feature_names.size(); }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {values.data() + i * cols(), cols()};
    }
};

struct MatrixData {
    FeatureMatrix matrix;
    std::vector<double> target;
};

struct TrainSpec {
    ModelKind kind = ModelKind::KnnRegress;
    int k = kDefaultK;
};

/// Fitted model. kNN kinds keep the standardized training rows; the linear
/// kind keeps len(features)+1 coefficients in standardized feature space,
/// intercept last.
struct TrainedModel {
    ModelKind kind = ModelKind::KnnRegress;
    int k = kDefaultK;
    std::vector<std::string> feature_names;
    std::string target_name;
    Standardization stats;
    std::vector<double> coefficients;
    std::vector<double> train_rows;  // row-major, feature_names.size() columns
    std::vector<double> train_targets;

    bool operator==(const TrainedModel&) const = default;
};

struct Metrics {
    bool classification = false;
    std::size_t n = 0;
    // regression
    double rmse = 0.0;
    double mae = 0.0;
    std::optional<double> r2;  // undefined when the target has zero spread
    // classification
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t true_pos = 0;
    std::size_t false_pos = 0;
    std::size_t true_neg = 0;
    std::size_t false_neg = 0;
};

struct SplitResult {
    MatrixData train;
    MatrixData test;
};

/// Keeps rows where every feature and the target are present and
/// standardizes the features. When `stats` is given it is applied as-is
/// instead of being estimated from the rows.
[[nodiscard]] MatrixData build_matrix(const MultiWellTable& table, const std::vector<std::string>& features,
                                      const std::string& target, const Standardization* stats = nullptr);

[[nodiscard]] TrainedModel train(const FeatureMatrix& matrix, std::span<const double> target, const TrainSpec& spec,
                                 const std::string& target_name = "TARGET");

/// Predictions for standardized rows.
[[nodiscard]] std::vector<double> predict_rows(const TrainedModel& model, const FeatureMatrix& matrix);

/// Adds (or overwrites) `<TARGET>_PRED`; rows with any missing feature stay missing.
[[nodiscard]] WellDataset predict(const TrainedModel& model, const WellDataset& ds);

[[nodiscard]] Metrics evaluate(const TrainedModel& model, const FeatureMatrix& matrix, std::span<const double> target);

/// Contiguous per-well split in depth order: first ceil(fraction * n_well)
/// rows train, the rest test.
[[nodiscard]] SplitResult depth_block_split(const FeatureMatrix& matrix, std::span<const double> target,
                                            double train_fraction = 0.8);

/// Solves the least-squares system A x = b (A row-major, rows x cols)
/// through the ridge-stabilized normal equations.
[[nodiscard]] std::vector<double> solve_least_squares(std::span<const double> a, std::size_t rows, std::size_t cols,
                                                      std::span<const double> b, double ridge = kRidge);

[[nodiscard]] std::string pred_curve_name(const std::string& target);

}  // namespace mlogs::model
