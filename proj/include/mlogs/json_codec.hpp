#pragma once

#include <vector>

#include <json.hpp>

#include "mlogs/dataset.hpp"
#include "mlogs/eda.hpp"
#include "mlogs/error.hpp"
#include "mlogs/model.hpp"
#include "mlogs/outliers.hpp"

// JSON shapes shared by the HTTP API, the CLI, and on-disk persistence.
namespace mlogs::codec {

using json = nlohmann::json;

json encode(const Error& e);
json encode(const StatSummary& s);
json encode(const eda::Histogram& h);
json encode(const eda::ScatterData& s);
json encode(const eda::BoxStats& b);
json encode(const eda::CorrelationMatrix& m);
json encode(const eda::PairGrid& g);
json encode(const std::vector<eda::WellCount>& counts);
json encode(const outliers::SelectionSet& s);
json encode(const outliers::RemovalReport& r);
json encode(const model::Metrics& m);
json encode(const model::TrainedModel& m);

/// Per-curve inventory of a well: name, unit, non-missing count.
json inventory(const WellDataset& ds);

outliers::SelectionSet decode_selection(const json& j);
outliers::BrushRect decode_rect(const json& j);
model::TrainedModel decode_model(const json& j);

/// Non-finite doubles become null so the output stays valid JSON.
json number_or_null(double v);

}  // namespace mlogs::codec
