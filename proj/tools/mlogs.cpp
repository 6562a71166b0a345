// mlogs: batch access to the well-log pipeline and the HTTP service.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mlogs/dataset.hpp"
#include "mlogs/error.hpp"
#include "mlogs/json_codec.hpp"
#include "mlogs/las_io.hpp"
#include "mlogs/model.hpp"
#include "mlogs/outliers.hpp"
#include "mlogs/service.hpp"

namespace {

using mlogs::codec::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

bool g_quiet = false;
mlogs::service::HttpServer* g_server = nullptr;

void log(const std::string& msg) {
    if (!g_quiet) std::cerr << "mlogs: " << msg << '\n';
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mlogs::Error(mlogs::ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw mlogs::Error(mlogs::ErrorCode::IoError, "cannot write '" + path + "'");
    out << content;
}

mlogs::WellDataset load_well(const std::string& path) {
    try {
        return mlogs::las::to_dataset(mlogs::las::read_las_file(path));
    } catch (const mlogs::Error& e) {
        throw mlogs::Error(e.code(), path + ": " + e.what(), e.location());
    }
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void on_signal(int) {
    if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mlogs - well-log workbench: LAS conversion, statistics, outlier cleaning, models, service"};
    app.require_subcommand(1);
    app.add_flag("-q,--quiet", g_quiet, "Suppress log messages on stderr");

    // convert
    std::vector<std::string> convert_inputs;
    std::string convert_out;
    std::string convert_curves;
    auto* convert = app.add_subcommand("convert", "Merge LAS files into one long-format CSV");
    convert->add_option("inputs", convert_inputs, "LAS files")->required();
    convert->add_option("-o,--out", convert_out, "Output CSV path (default: stdout)");
    convert->add_option("--curves", convert_curves, "Comma-separated curve list (default: all curves)");

    // stats
    std::string stats_input;
    std::string stats_curve;
    auto* stats = app.add_subcommand("stats", "Print descriptive statistics of one curve as JSON");
    stats->add_option("input", stats_input, "LAS file")->required();
    stats->add_option("-c,--curve", stats_curve, "Curve mnemonic")->required();

    // clean
    std::string clean_input;
    std::string clean_out;
    std::string clean_curve;
    std::string clean_method = "iqr";
    std::string clean_mode = "mask";
    std::string clean_apply_to;
    double clean_threshold = 3.0;
    double clean_k = 1.5;
    auto* clean = app.add_subcommand("clean", "Flag outliers on one curve and mask or drop them");
    clean->add_option("input", clean_input, "LAS file")->required();
    clean->add_option("-c,--curve", clean_curve, "Curve to flag")->required();
    clean->add_option("-m,--method", clean_method, "zscore or iqr")->check(CLI::IsMember({"zscore", "iqr"}));
    clean->add_option("--threshold", clean_threshold, "z-score threshold");
    clean->add_option("--k", clean_k, "IQR fence multiplier");
    clean->add_option("--mode", clean_mode, "mask or drop")->check(CLI::IsMember({"mask", "drop"}));
    clean->add_option("--apply-to", clean_apply_to, "Curves to mask: comma list or ALL (default: the flagged curve)");
    clean->add_option("-o,--out", clean_out, "Output LAS path")->required();

    // train
    std::string train_input;
    std::string train_features;
    std::string train_target;
    std::string train_kind = "knn_regress";
    std::string train_out;
    int train_k = mlogs::model::kDefaultK;
    double train_split = 0.8;
    auto* train = app.add_subcommand("train", "Train a model on a long-format CSV");
    train->add_option("input", train_input, "CSV produced by convert")->required();
    train->add_option("-f,--features", train_features, "Comma-separated feature columns")->required();
    train->add_option("-t,--target", train_target, "Target column")->required();
    train->add_option("--kind", train_kind, "knn_regress, linear_regress or knn_classify")
        ->check(CLI::IsMember({"knn_regress", "linear_regress", "knn_classify"}));
    train->add_option("--k", train_k, "Neighbours for kNN models");
    train->add_option("--split", train_split, "Train fraction of each well (depth-contiguous)");
    train->add_option("-o,--out", train_out, "Model JSON path")->required();

    // predict
    std::string predict_model;
    std::string predict_input;
    std::string predict_out;
    auto* predict = app.add_subcommand("predict", "Add <TARGET>_PRED to a LAS file");
    predict->add_option("--model", predict_model, "Model JSON from train")->required();
    predict->add_option("input", predict_input, "LAS file")->required();
    predict->add_option("-o,--out", predict_out, "Output LAS path")->required();

    // serve
    mlogs::service::ServiceConfig serve_cfg = mlogs::service::config_from_env();
    std::string serve_data_dir;
    std::string serve_static_dir;
    std::size_t serve_cap_mb = 0;
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--host", serve_cfg.host, "Bind address (env MLOGS_HOST)");
    serve->add_option("-p,--port", serve_cfg.port, "Port, 0 for any (env MLOGS_PORT)");
    serve->add_option("--data-dir", serve_data_dir, "Project storage directory (env MLOGS_DATA_DIR)");
    serve->add_option("--static-dir", serve_static_dir, "Directory of the built web UI (env MLOGS_STATIC_DIR)");
    serve->add_option("--upload-cap-mb", serve_cap_mb, "Upload size cap in MB (env MLOGS_UPLOAD_CAP_MB)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*convert) {
            std::vector<mlogs::WellDataset> sets;
            for (const auto& path : convert_inputs) sets.push_back(load_well(path));
            const auto curves = convert_curves.empty() ? mlogs::curve_union(sets) : split_names(convert_curves);
            const auto merged = mlogs::las::merge_to_csv(sets, curves);
            write_text(convert_out, merged.csv);
            log("wrote " + std::to_string(merged.table.rows.size()) + " rows from " + std::to_string(sets.size()) +
                " well(s)");
        } else if (*stats) {
            const auto ds = load_well(stats_input);
            std::cout << mlogs::codec::encode(mlogs::summary_stats(ds, stats_curve)).dump(2) << '\n';
        } else if (*clean) {
            const auto ds = load_well(clean_input);
            const auto& values = ds.curve(clean_curve);
            mlogs::outliers::SelectionSet sel;
            sel.well = ds.well();
            if (clean_method == "zscore") {
                sel.rows = mlogs::outliers::zscore_flags(values, clean_threshold);
                sel.provenance = mlogs::outliers::Provenance::ZScore;
            } else {
                sel.rows = mlogs::outliers::iqr_flags(values, clean_k);
                sel.provenance = mlogs::outliers::Provenance::Iqr;
            }
            std::vector<std::string> apply_to{clean_curve};
            if (clean_apply_to == "ALL") apply_to.clear();
            else if (!clean_apply_to.empty()) apply_to = split_names(clean_apply_to);
            const auto mode =
                clean_mode == "drop" ? mlogs::outliers::RemovalMode::Drop : mlogs::outliers::RemovalMode::Mask;
            const auto result = mlogs::outliers::apply_removal(ds, sel, mode, apply_to);
            write_text(clean_out, mlogs::las::write_las(mlogs::las::dataset_to_las(result.dataset)));
            json report = mlogs::codec::encode(result.report);
            report["flagged_rows"] = sel.rows;
            report["rows_out"] = result.dataset.row_count();
            std::cout << report.dump(2) << '\n';
        } else if (*train) {
            const auto table = mlogs::las::csv_to_table(read_text(train_input));
            const auto features = split_names(train_features);
            const auto data = mlogs::model::build_matrix(table, features, train_target);
            const auto split = mlogs::model::depth_block_split(data.matrix, data.target, train_split);
            const mlogs::model::TrainSpec spec{mlogs::model::parse_kind(train_kind), train_k};
            const auto m = mlogs::model::train(split.train.matrix, split.train.target, spec, train_target);
            write_text(train_out, mlogs::codec::encode(m).dump(2) + "\n");
            const json out{{"model", train_out},
                           {"train", mlogs::codec::encode(mlogs::model::evaluate(m, split.train.matrix, split.train.target))},
                           {"test", mlogs::codec::encode(mlogs::model::evaluate(m, split.test.matrix, split.test.target))}};
            std::cout << out.dump(2) << '\n';
        } else if (*predict) {
            const auto m = mlogs::codec::decode_model(json::parse(read_text(predict_model)));
            const auto ds = mlogs::model::predict(m, load_well(predict_input));
            write_text(predict_out, mlogs::las::write_las(mlogs::las::dataset_to_las(ds)));
            const auto name = mlogs::model::pred_curve_name(m.target_name);
            std::cout << json{{"well", ds.well()}, {"curve", name}, {"non_missing", ds.curve(name).present_count()}}.dump(2)
                      << '\n';
        } else if (*serve) {
            if (!serve_data_dir.empty()) serve_cfg.data_dir = serve_data_dir;
            if (!serve_static_dir.empty()) serve_cfg.static_dir = serve_static_dir;
            if (serve_cap_mb != 0) serve_cfg.upload_cap = serve_cap_mb * 1024u * 1024u;
            mlogs::service::Service service(serve_cfg.data_dir, serve_cfg.upload_cap);
            mlogs::service::HttpServer server(service, serve_cfg);
            const int port = server.bind();
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            log("listening on http://" + serve_cfg.host + ":" + std::to_string(port) + " (data: " +
                serve_cfg.data_dir.string() + ")");
            // scripts starting with --port 0 read the bound port from stdout
            std::cout << json{{"host", serve_cfg.host}, {"port", port}}.dump() << std::endl;
            server.listen();
            g_server = nullptr;
        }
    } catch (const mlogs::Error& e) {
        std::cerr << mlogs::codec::encode(e).dump() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "mlogs: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
