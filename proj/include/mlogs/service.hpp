#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mlogs/dataset.hpp"
#include "mlogs/model.hpp"
#include "mlogs/outliers.hpp"

namespace mlogs::service {

using json = nlohmann::json;

inline constexpr std::size_t kDefaultUploadCap = 100u * 1024u * 1024u;

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir = "mlogs-data";
    std::size_t upload_cap = kDefaultUploadCap;
    std::filesystem::path static_dir;  // empty: no static hosting
};

/// Reads MLOGS_HOST, MLOGS_PORT, MLOGS_DATA_DIR, MLOGS_UPLOAD_CAP_MB and
/// MLOGS_STATIC_DIR on top of `base`.
[[nodiscard]] ServiceConfig config_from_env(ServiceConfig base = {});

struct WellEntry {
    std::string id;
    WellDataset dataset;
    std::optional<WellDataset> undo;
};

struct Project {
    std::string id;
    std::string name;
    std::uint64_t revision = 0;
    std::uint64_t next_seq = 1;
    std::vector<WellEntry> wells;
    std::map<std::string, outliers::SelectionSet> selections;
    std::map<std::string, model::TrainedModel> models;

    [[nodiscard]] const WellEntry& well(const std::string& wid) const;
    [[nodiscard]] WellEntry& well(const std::string& wid);
};

struct ExportFile {
    std::string content;
    std::string content_type;
    std::string filename;
};

/// Query parameters of a chart request (kind, well, curve, x, y, curves, bins, selection, ...).
using ChartParams = std::map<std::string, std::string>;

/// Project store and every API operation, independent of the HTTP
/// transport. Each project is guarded by its own reader/writer lock:
/// mutations are serialized and persisted before they become visible,
/// reads see one consistent revision.
class Service {
public:
    explicit Service(std::filesystem::path data_dir, std::size_t upload_cap = kDefaultUploadCap);

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    [[nodiscard]] std::string create_project(const std::string& name);
    [[nodiscard]] json list_projects() const;

    [[nodiscard]] json upload_las(const std::string& pid, std::string_view bytes, const std::string& filename = {});
    [[nodiscard]] json list_wells(const std::string& pid) const;

    [[nodiscard]] json rename_curve(const std::string& pid, const std::string& wid, const std::string& old_name,
                                    const std::string& new_name);
    [[nodiscard]] json apply_limits(const std::string& pid, const std::string& wid, const std::string& curve, double lo,
                                    double hi);
    [[nodiscard]] json select_curves(const std::string& pid, const std::string& wid,
                                     const std::vector<std::string>& names);

    [[nodiscard]] json chart(const std::string& pid, const ChartParams& params) const;

    /// Body forms: {well, rows}, {well, rect}, {well, method: zscore|iqr, curve, threshold|k},
    /// {well, combine: {a, b, op}}.
    [[nodiscard]] json save_selection(const std::string& pid, const json& body);
    [[nodiscard]] json list_selections(const std::string& pid) const;
    [[nodiscard]] json apply_selection(const std::string& pid, const std::string& sid, outliers::RemovalMode mode,
                                       const std::vector<std::string>& curves);
    [[nodiscard]] json undo(const std::string& pid, const std::string& wid);

    /// Body: {wells?, features, target, kind, k?, split_fraction?}.
    [[nodiscard]] json train_model(const std::string& pid, const json& body);
    [[nodiscard]] json run_predict(const std::string& pid, const std::string& mid, const std::string& wid);

    /// `well` is a well id or "ALL"; format is "las" or "csv".
    [[nodiscard]] ExportFile export_data(const std::string& pid, const std::string& well, const std::string& format,
                                         const std::vector<std::string>& curves = {}) const;

    [[nodiscard]] Project snapshot(const std::string& pid) const;
    [[nodiscard]] std::uint64_t revision(const std::string& pid) const;
    [[nodiscard]] std::size_t upload_cap() const noexcept { return upload_cap_; }
    [[nodiscard]] const std::filesystem::path& data_dir() const noexcept { return data_dir_; }

private:
    struct Slot {
        mutable std::shared_mutex mutex;
        Project project;
    };

    [[nodiscard]] std::shared_ptr<Slot> slot(const std::string& pid) const;
    void load_all();
    void persist_project(const Project& p) const;
    void persist_well(const Project& p, const WellEntry& w) const;
    json commit_well(Slot& s, const std::string& wid, WellDataset next, json extra);

    std::filesystem::path data_dir_;
    std::size_t upload_cap_;
    mutable std::mutex projects_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> projects_;
};

/// Exact binary image of a dataset: a JSON manifest plus column data.
void save_dataset(const WellDataset& ds, const std::filesystem::path& stem);
[[nodiscard]] WellDataset load_dataset(const std::filesystem::path& stem);

class HttpServer {
public:
    HttpServer(Service& service, ServiceConfig config);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the listening socket; port 0 picks a free port. Returns the bound port.
    int bind();
    /// Serves until stop() is called. bind() must have succeeded.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mlogs::service
