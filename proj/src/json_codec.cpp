#include "mlogs/json_codec.hpp"

#include <cmath>
#include <string>

namespace mlogs::codec {

namespace {

json optional_number(const std::optional<double>& v) { return v ? number_or_null(*v) : json(nullptr); }

template <typename T>
T required(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json encode(const Error& e) {
    json loc = json::object();
    if (e.location().line) loc["line"] = *e.location().line;
    if (!e.location().curve.empty()) loc["curve"] = e.location().curve;
    return {{"error", {{"code", std::string(code_name(e.code()))}, {"message", e.what()}, {"location", loc}}}};
}

json encode(const StatSummary& s) {
    return {{"count", s.count}, {"mean", s.mean}, {"std", optional_number(s.std)}, {"min", s.min},
            {"p25", s.p25},     {"p50", s.p50},   {"p75", s.p75},                  {"max", s.max}};
}

json encode(const eda::Histogram& h) {
    return {{"edges", h.edges}, {"counts", h.counts}, {"excluded_missing", h.excluded_missing}};
}

json encode(const eda::ScatterData& s) {
    json rows = json::array();
    json xs = json::array();
    json ys = json::array();
    for (const auto& p : s.points) {
        rows.push_back(p.row_index);
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    return {{"x_name", s.x_name}, {"y_name", s.y_name}, {"row_index", rows}, {"x", xs}, {"y", ys}};
}

json encode(const eda::BoxStats& b) {
    return {{"q1", b.q1},
            {"median", b.median},
            {"q3", b.q3},
            {"whisker_lo", b.whisker_lo},
            {"whisker_hi", b.whisker_hi},
            {"outlier_indices", b.outlier_indices}};
}

json encode(const eda::CorrelationMatrix& m) {
    json r = json::array();
    for (const auto& row : m.r) {
        json out = json::array();
        for (const auto& v : row) out.push_back(optional_number(v));
        r.push_back(out);
    }
    return {{"names", m.names}, {"r", r}, {"n_pairs", m.n_pairs}};
}

json encode(const eda::PairGrid& g) {
    json cells = json::array();
    for (const auto& row : g.cells) {
        json out = json::array();
        for (const auto& cell : row) {
            if (const auto* h = std::get_if<eda::Histogram>(&cell)) {
                json c = encode(*h);
                c["type"] = "histogram";
                out.push_back(c);
            } else {
                json c = encode(std::get<eda::ScatterData>(cell));
                c["type"] = "scatter";
                out.push_back(c);
            }
        }
        cells.push_back(out);
    }
    return {{"names", g.names}, {"cells", cells}};
}

json encode(const std::vector<eda::WellCount>& counts) {
    json out = json::array();
    for (const auto& c : counts) out.push_back({{"well", c.well}, {"rows", c.rows}});
    return out;
}

json encode(const outliers::SelectionSet& s) {
    return {{"id", s.id},
            {"well", s.well},
            {"provenance", std::string(outliers::provenance_name(s.provenance))},
            {"created_from", s.created_from},
            {"rows", s.rows}};
}

json encode(const outliers::RemovalReport& r) { return {{"rows", r.rows_affected}, {"cells", r.cells_masked}}; }

json encode(const model::Metrics& m) {
    json j{{"n", m.n}};
    if (m.classification) {
        j["accuracy"] = m.accuracy;
        j["precision"] = m.precision;
        j["recall"] = m.recall;
        j["f1"] = m.f1;
        j["confusion"] = {{"tp", m.true_pos}, {"fp", m.false_pos}, {"tn", m.true_neg}, {"fn", m.false_neg}};
    } else {
        j["rmse"] = number_or_null(m.rmse);
        j["mae"] = number_or_null(m.mae);
        j["r2"] = optional_number(m.r2);
    }
    return j;
}

json encode(const model::TrainedModel& m) {
    json j{{"format", "mlogs-model/1"},
           {"kind", std::string(model::kind_name(m.kind))},
           {"hyperparams", json::object()},
           {"feature_names", m.feature_names},
           {"target_name", m.target_name},
           {"means", m.stats.means},
           {"stds", m.stats.stds}};
    if (m.kind == model::ModelKind::LinearRegress) {
        j["coefficients"] = m.coefficients;
    } else {
        j["hyperparams"]["k"] = m.k;
        j["train_rows"] = m.train_rows;
        j["train_targets"] = m.train_targets;
    }
    return j;
}

json inventory(const WellDataset& ds) {
    json curves = json::array();
    for (const auto& c : ds.curves()) {
        curves.push_back({{"name", c.name}, {"unit", c.data.unit}, {"non_missing", c.data.present_count()}});
    }
    json j{{"well", ds.well()}, {"rows", ds.row_count()}, {"depth_unit", ds.depth_unit()}, {"curves", curves}};
    if (ds.row_count() > 0) {
        j["depth_min"] = ds.depth().front();
        j["depth_max"] = ds.depth().back();
    }
    return j;
}

outliers::SelectionSet decode_selection(const json& j) {
    outliers::SelectionSet s;
    s.id = j.value("id", std::string{});
    s.well = required<std::string>(j, "well");
    s.provenance = outliers::parse_provenance(j.value("provenance", std::string("manual")));
    s.created_from = j.value("created_from", std::string{});
    s.rows = required<std::vector<std::size_t>>(j, "rows");
    return s;
}

outliers::BrushRect decode_rect(const json& j) {
    outliers::BrushRect r;
    r.x_curve = required<std::string>(j, "x_curve");
    r.y_curve = required<std::string>(j, "y_curve");
    r.x_lo = required<double>(j, "x_lo");
    r.x_hi = required<double>(j, "x_hi");
    r.y_lo = required<double>(j, "y_lo");
    r.y_hi = required<double>(j, "y_hi");
    return r;
}

model::TrainedModel decode_model(const json& j) {
    model::TrainedModel m;
    m.kind = model::parse_kind(required<std::string>(j, "kind"));
    m.feature_names = required<std::vector<std::string>>(j, "feature_names");
    m.target_name = required<std::string>(j, "target_name");
    m.stats.means = required<std::vector<double>>(j, "means");
    m.stats.stds = required<std::vector<double>>(j, "stds");
    const std::size_t p = m.feature_names.size();
    if (p == 0 || m.stats.means.size() != p || m.stats.stds.size() != p) {
        throw Error(ErrorCode::InvalidArgument, "model statistics do not match its feature list");
    }
    if (m.kind == model::ModelKind::LinearRegress) {
        m.k = 0;
        m.coefficients = required<std::vector<double>>(j, "coefficients");
        if (m.coefficients.size() != p + 1) {
            throw Error(ErrorCode::InvalidArgument, "linear model needs len(features)+1 coefficients");
        }
    } else {
        const json hp = j.value("hyperparams", json::object());
        m.k = required<int>(hp, "k");
        m.train_rows = required<std::vector<double>>(j, "train_rows");
        m.train_targets = required<std::vector<double>>(j, "train_targets");
        if (m.k < 1 || m.train_rows.size() != m.train_targets.size() * p ||
            m.train_targets.size() < static_cast<std::size_t>(m.k)) {
            throw Error(ErrorCode::InvalidArgument, "kNN model rows are inconsistent with k and the feature list");
        }
    }
    return m;
}

}  // namespace mlogs::codec
