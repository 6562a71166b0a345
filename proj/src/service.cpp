#include "mlogs/service.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "mlogs/eda.hpp"
#include "mlogs/error.hpp"
#include "mlogs/json_codec.hpp"
#include "mlogs/las_io.hpp"

namespace mlogs::service {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little, "dataset storage assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'M', 'L', 'O', 'G', 'S', 'D', 'S', '1'};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write-then-rename so readers of the data directory never see a torn file.
void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorCode::IoError, "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot replace '" + path.string() + "': " + ec.message());
}

template <typename T>
void put_raw(std::string& out, const T& v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <typename T>
T get_raw(std::string_view data, std::size_t& pos) {
    if (pos + sizeof(T) > data.size()) throw Error(ErrorCode::IoError, "truncated dataset file");
    T v;
    std::memcpy(&v, data.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}

std::string random_id() {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mu);
    std::ostringstream ss;
    ss << std::hex << (rng() & 0xffffffffffffULL);
    std::string s = ss.str();
    return std::string(12 - std::min<std::size_t>(12, s.size()), '0') + s;
}

std::string sanitize_id(const std::string& name) {
    std::string out;
    for (unsigned char c : name) out.push_back(std::isalnum(c) || c == '_' || c == '-' ? static_cast<char>(c) : '_');
    if (out.empty()) out = "well";
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

const std::string& param(const ChartParams& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end() || it->second.empty()) {
        throw Error(ErrorCode::InvalidArgument, "missing query parameter '" + key + "'");
    }
    return it->second;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "parameter '" + what + "' is not a number: '" + s + "'");
    }
}

json well_payload(const Project& p, const WellEntry& w) {
    json j = codec::inventory(w.dataset);
    j["id"] = w.id;
    j["can_undo"] = w.undo.has_value();
    j["revision"] = p.revision;
    return j;
}

template <typename T>
T body_field(const json& body, const char* key) {
    if (!body.is_object() || !body.contains(key)) {
        throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
    }
    try {
        return body.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration

ServiceConfig config_from_env(ServiceConfig base) {
    if (const char* v = std::getenv("MLOGS_HOST")) base.host = v;
    if (const char* v = std::getenv("MLOGS_PORT")) base.port = std::atoi(v);
    if (const char* v = std::getenv("MLOGS_DATA_DIR")) base.data_dir = v;
    if (const char* v = std::getenv("MLOGS_UPLOAD_CAP_MB")) {
        base.upload_cap = static_cast<std::size_t>(std::strtoull(v, nullptr, 10)) * 1024u * 1024u;
    }
    if (const char* v = std::getenv("MLOGS_STATIC_DIR")) base.static_dir = v;
    return base;
}

// ---------------------------------------------------------------------------
// dataset storage

void save_dataset(const WellDataset& ds, const fs::path& stem) {
    json manifest{{"format", "mlogs-dataset/1"},
                  {"well", ds.well()},
                  {"depth_name", ds.depth_name()},
                  {"depth_unit", ds.depth_unit()},
                  {"rows", ds.row_count()}};
    json curves = json::array();
    for (const auto& c : ds.curves()) curves.push_back({{"name", c.name}, {"unit", c.data.unit}});
    manifest["curves"] = curves;
    json meta = json::array();
    for (const auto& m : ds.metadata()) {
        meta.push_back({{"mnemonic", m.mnemonic}, {"unit", m.unit}, {"value", m.value}, {"description", m.description}});
    }
    manifest["metadata"] = meta;

    std::string bin(kMagic, sizeof kMagic);
    put_raw<std::uint64_t>(bin, ds.row_count());
    put_raw<std::uint64_t>(bin, ds.curves().size());
    for (double d : ds.depth()) put_raw(bin, d);
    for (const auto& c : ds.curves()) {
        for (double v : c.data.values) put_raw(bin, v);
        for (bool m : c.data.missing) bin.push_back(m ? '\1' : '\0');
    }

    fs::path bin_path = stem;
    bin_path += ".bin";
    fs::path json_path = stem;
    json_path += ".json";
    write_file_atomic(bin_path, bin);
    write_file_atomic(json_path, manifest.dump(2));
}

WellDataset load_dataset(const fs::path& stem) {
    fs::path bin_path = stem;
    bin_path += ".bin";
    fs::path json_path = stem;
    json_path += ".json";
    const json manifest = json::parse(read_file(json_path));
    const std::string bin = read_file(bin_path);

    if (bin.size() < sizeof kMagic || std::memcmp(bin.data(), kMagic, sizeof kMagic) != 0) {
        throw Error(ErrorCode::IoError, "'" + bin_path.string() + "' is not a dataset file");
    }
    std::size_t pos = sizeof kMagic;
    const auto rows = get_raw<std::uint64_t>(bin, pos);
    const auto ncurves = get_raw<std::uint64_t>(bin, pos);
    const auto& curves = manifest.at("curves");
    if (rows != manifest.at("rows").get<std::uint64_t>() || ncurves != curves.size()) {
        throw Error(ErrorCode::IoError, "dataset manifest and column file disagree for '" + stem.string() + "'");
    }
    std::vector<double> depth(rows);
    for (auto& d : depth) d = get_raw<double>(bin, pos);
    WellDataset ds(manifest.at("well").get<std::string>(), std::move(depth), manifest.at("depth_unit").get<std::string>(),
                   manifest.at("depth_name").get<std::string>());
    for (const auto& c : curves) {
        std::vector<double> values(rows);
        std::vector<bool> missing(rows);
        for (auto& v : values) v = get_raw<double>(bin, pos);
        for (std::size_t i = 0; i < rows; ++i) missing[i] = get_raw<char>(bin, pos) != 0;
        ds.put_curve(c.at("name").get<std::string>(),
                     CurveData(std::move(values), std::move(missing), c.at("unit").get<std::string>()));
    }
    std::vector<MetaEntry> meta;
    for (const auto& m : manifest.value("metadata", json::array())) {
        meta.push_back({m.at("mnemonic").get<std::string>(), m.at("unit").get<std::string>(),
                        m.at("value").get<std::string>(), m.at("description").get<std::string>()});
    }
    ds.set_metadata(std::move(meta));
    return ds;
}

// ---------------------------------------------------------------------------
// Project

const WellEntry& Project::well(const std::string& wid) const {
    for (const auto& w : wells) {
        if (w.id == wid) return w;
    }
    throw Error(ErrorCode::UnknownWell, "unknown well '" + wid + "'");
}

WellEntry& Project::well(const std::string& wid) {
    return const_cast<WellEntry&>(static_cast<const Project&>(*this).well(wid));
}

// ---------------------------------------------------------------------------
// Service: storage

Service::Service(fs::path data_dir, std::size_t upload_cap) : data_dir_(std::move(data_dir)), upload_cap_(upload_cap) {
    std::error_code ec;
    if (fs::exists(data_dir_, ec) && !fs::is_directory(data_dir_, ec)) {
        throw Error(ErrorCode::IoError, "data directory '" + data_dir_.string() + "' is not a directory");
    }
    fs::create_directories(data_dir_ / "projects", ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot create data directory '" + data_dir_.string() + "': " + ec.message());
    }
    load_all();
}

void Service::load_all() {
    for (const auto& entry : fs::directory_iterator(data_dir_ / "projects")) {
        if (!entry.is_directory()) continue;
        const fs::path dir = entry.path();
        if (!fs::exists(dir / "project.json")) continue;
        const json pj = json::parse(read_file(dir / "project.json"));

        auto s = std::make_shared<Slot>();
        Project& p = s->project;
        p.id = pj.at("id").get<std::string>();
        p.name = pj.at("name").get<std::string>();
        p.revision = pj.at("revision").get<std::uint64_t>();
        p.next_seq = pj.at("next_seq").get<std::uint64_t>();
        for (const auto& w : pj.at("wells")) {
            WellEntry we;
            we.id = w.at("id").get<std::string>();
            we.dataset = load_dataset(dir / "wells" / we.id);
            if (w.value("has_undo", false)) we.undo = load_dataset(dir / "wells" / (we.id + ".undo"));
            p.wells.push_back(std::move(we));
        }
        for (const auto& sj : pj.at("selections")) {
            auto sel = codec::decode_selection(sj);
            p.selections.emplace(sel.id, std::move(sel));
        }
        for (const auto& mid : pj.at("models")) {
            const auto id = mid.get<std::string>();
            p.models.emplace(id, codec::decode_model(json::parse(read_file(dir / "models" / (id + ".json")))));
        }
        projects_.emplace(p.id, std::move(s));
    }
}

void Service::persist_well(const Project& p, const WellEntry& w) const {
    const fs::path dir = data_dir_ / "projects" / p.id / "wells";
    fs::create_directories(dir);
    save_dataset(w.dataset, dir / w.id);
    if (w.undo) save_dataset(*w.undo, dir / (w.id + ".undo"));
}

void Service::persist_project(const Project& p) const {
    const fs::path dir = data_dir_ / "projects" / p.id;
    fs::create_directories(dir / "models");
    json wells = json::array();
    for (const auto& w : p.wells) wells.push_back({{"id", w.id}, {"has_undo", w.undo.has_value()}});
    json sels = json::array();
    for (const auto& [id, s] : p.selections) sels.push_back(codec::encode(s));
    json models = json::array();
    for (const auto& [id, m] : p.models) {
        const fs::path mp = dir / "models" / (id + ".json");
        if (!fs::exists(mp)) write_file_atomic(mp, codec::encode(m).dump());
        models.push_back(id);
    }
    const json pj{{"id", p.id},         {"name", p.name}, {"revision", p.revision}, {"next_seq", p.next_seq},
                  {"wells", wells},     {"selections", sels}, {"models", models}};
    write_file_atomic(dir / "project.json", pj.dump(2));
}

std::shared_ptr<Service::Slot> Service::slot(const std::string& pid) const {
    std::lock_guard lock(projects_mutex_);
    auto it = projects_.find(pid);
    if (it == projects_.end()) throw Error(ErrorCode::UnknownProject, "unknown project '" + pid + "'");
    return it->second;
}

// Replaces a well's dataset, keeping the previous one as the undo level.
// Caller holds the slot's exclusive lock.
json Service::commit_well(Slot& s, const std::string& wid, WellDataset next, json extra) {
    Project& p = s.project;
    WellEntry& w = p.well(wid);
    WellEntry before = w;
    const bool grid_changed = next.depth() != w.dataset.depth();

    w.undo = std::move(w.dataset);
    w.dataset = std::move(next);
    std::vector<std::string> invalidated;
    auto saved_selections = p.selections;
    if (grid_changed) {
        // row-indexed selections no longer describe the same samples
        for (auto it = p.selections.begin(); it != p.selections.end();) {
            if (it->second.well == wid) {
                invalidated.push_back(it->first);
                it = p.selections.erase(it);
            } else {
                ++it;
            }
        }
    }
    ++p.revision;
    try {
        persist_well(p, w);
        persist_project(p);
    } catch (...) {
        w = std::move(before);
        p.selections = std::move(saved_selections);
        --p.revision;
        throw;
    }
    json out = well_payload(p, w);
    if (!invalidated.empty()) out["invalidated_selections"] = invalidated;
    for (auto& [k, v] : extra.items()) out[k] = v;
    return out;
}

// ---------------------------------------------------------------------------
// Service: projects and wells

std::string Service::create_project(const std::string& name) {
    if (name.empty()) throw Error(ErrorCode::InvalidArgument, "project name must not be empty");
    auto s = std::make_shared<Slot>();
    s->project.name = name;
    std::lock_guard lock(projects_mutex_);
    do {
        s->project.id = random_id();
    } while (projects_.count(s->project.id) != 0);
    persist_project(s->project);
    projects_.emplace(s->project.id, s);
    return s->project.id;
}

json Service::list_projects() const {
    std::vector<std::shared_ptr<Slot>> slots;
    {
        std::lock_guard lock(projects_mutex_);
        for (const auto& [id, s] : projects_) slots.push_back(s);
    }
    json out = json::array();
    for (const auto& s : slots) {
        std::shared_lock lock(s->mutex);
        out.push_back({{"id", s->project.id},
                       {"name", s->project.name},
                       {"revision", s->project.revision},
                       {"wells", s->project.wells.size()}});
    }
    return out;
}

json Service::upload_las(const std::string& pid, std::string_view bytes, const std::string& filename) {
    if (bytes.size() > upload_cap_) {
        throw Error(ErrorCode::PayloadTooLarge, "upload of " + std::to_string(bytes.size()) + " bytes exceeds the " +
                                                    std::to_string(upload_cap_) + "-byte cap");
    }
    const std::string stem = filename.empty() ? std::string{} : fs::path(filename).stem().string();
    WellDataset ds = las::to_dataset(las::parse_las(bytes, stem));

    auto s = slot(pid);
    std::unique_lock lock(s->mutex);
    Project& p = s->project;
    const std::string base = sanitize_id(ds.well());
    std::string id = base;
    for (int n = 2; std::any_of(p.wells.begin(), p.wells.end(), [&](const WellEntry& w) { return w.id == id; }); ++n) {
        id = base + "_" + std::to_string(n);
    }
    p.wells.push_back({id, std::move(ds), std::nullopt});
    ++p.revision;
    try {
        persist_well(p, p.wells.back());
        persist_project(p);
    } catch (...) {
        p.wells.pop_back();
        --p.revision;
        throw;
    }
    json out = well_payload(p, p.wells.back());
    out["well_id"] = id;
    return out;
}

json Service::list_wells(const std::string& pid) const {
    auto s = slot(pid);
    std::shared_lock lock(s->mutex);
    json wells = json::array();
    for (const auto& w : s->project.wells) wells.push_back(well_payload(s->project, w));
    return {{"project", pid}, {"revision", s->project.revision}, {"wells", wells}};
}

json Service::rename_curve(const std::string& pid, const std::string& wid, const std::string& old_name,
                           const std::string& new_name) {
    auto s = slot(pid);
    std::unique_lock lock(s->mutex);
    WellDataset next = mlogs::rename_curve(s->project.well(wid).dataset, old_name, new_name);
    return commit_well(*s, wid, std::move(next), json::object());
}

json Service::apply_limits(const std::string& pid, const std::string& wid, const std::string& curve, double lo,
                           double hi) {
    auto s = slot(pid);
    std::unique_lock lock(s->mutex);
    LimitResult r = mlogs::apply_limits(s->project.well(wid).dataset, curve, lo, hi);
    return commit_well(*s, wid, std::move(r.dataset), {{"newly_masked", r.newly_masked}});
}

json Service::select_curves(const std::string& pid, const std::string& wid, const std::vector<std::string>& names) {
    auto s = slot(pid);
    std::unique_lock lock(s->mutex);
    WellDataset next = mlogs::select_curves(s->project.well(wid).dataset, names);
    return commit_well(*s, wid, std::move(next), json::object());
}

// ---------------------------------------------------------------------------
// Service: charts

json Service::chart(const std::string& pid, const ChartParams& params) const {
    auto s = slot(pid);
    std::shared_lock lock(s->mutex);
    const Project& p = s->project;
    const std::string& kind = param(params, "kind");
    const auto get = [&](const std::string& key) -> std::string {
        auto it = params.find(key);
        return it == params.end() ? std::string{} : it->second;
    };
    const int bins = get("bins").empty() ? eda::kDefaultBins : static_cast<int>(parse_number(get("bins"), "bins"));

    json out;
    if (kind == "bar") {
        std::vector<WellDataset> sets;
        const auto ids = split_list(get("wells"));
        if (ids.empty()) {
            for (const auto& w : p.wells) sets.push_back(w.dataset);
        } else {
            for (const auto& id : ids) sets.push_back(p.well(id).dataset);
        }
        std::vector<eda::WellCount> counts;
        const auto names = curve_union(sets);
        if (!sets.empty() && !names.empty()) {
            counts = eda::category_counts(concat_wells(sets, names));
        } else {
            for (const auto& ds : sets) counts.push_back({ds.well(), ds.row_count()});
        }
        out = {{"bars", codec::encode(counts)}};
    } else {
        const WellDataset& ds = p.well(param(params, "well")).dataset;
        if (kind == "histogram") {
            const CurveData& c = ds.curve(param(params, "curve"));
            const eda::Histogram h = eda::histogram(c, bins);
            out = codec::encode(h);
            if (const std::string sid = get("selection"); !sid.empty()) {
                auto it = p.selections.find(sid);
                if (it == p.selections.end()) throw Error(ErrorCode::UnknownSelection, "unknown selection '" + sid + "'");
                out["selection"] = sid;
                out["filtered_counts"] = outliers::filtered_histogram(c, it->second.rows, h.edges);
            }
        } else if (kind == "filtered_histogram") {
            const CurveData& c = ds.curve(param(params, "curve"));
            std::vector<double> edges;
            for (const auto& e : split_list(param(params, "edges"))) edges.push_back(parse_number(e, "edges"));
            const std::string& sid = param(params, "selection");
            auto it = p.selections.find(sid);
            if (it == p.selections.end()) throw Error(ErrorCode::UnknownSelection, "unknown selection '" + sid + "'");
            out = {{"edges", edges}, {"selection", sid},
                   {"counts", outliers::filtered_histogram(c, it->second.rows, edges)}};
        } else if (kind == "scatter") {
            out = codec::encode(eda::scatter_pairs(ds, param(params, "x"), param(params, "y")));
        } else if (kind == "box") {
            out = codec::encode(eda::box_stats(ds.curve(param(params, "curve"))));
        } else if (kind == "stats") {
            out = codec::encode(summary_stats(ds, param(params, "curve")));
        } else if (kind == "pair") {
            out = codec::encode(eda::pair_grid(ds, split_list(param(params, "curves")), bins));
        } else if (kind == "corr") {
            auto names = split_list(get("curves"));
            if (names.empty()) names = ds.curve_names();
            out = codec::encode(eda::correlation_matrix(ds, names));
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown chart kind '" + kind + "'");
        }
        out["well"] = param(params, "well");
    }
    out["kind"] = kind;
    out["revision"] = p.revision;
    return out;
}

// ---------------------------------------------------------------------------
// Service: selections and cleaning

json Service::save_selection(const std::string& pid, const json& body) {
    const std::string wid = body_field<std::string>(body, "well");
    auto s = slot(pid);
    std::unique_lock lock(s->mutex);
    Project& p = s->project;
    const WellDataset& ds = p.well(wid).dataset;

    outliers::SelectionSet sel;
    if (body.contains("rect")) {
        sel = outliers::brush_select(ds, codec::decode_rect(body.at("rect")));
    } else if (body.contains("method")) {
        const auto method = body_field<std::string>(body, "method");
        const auto curve = body_field<std::string>(body, "curve");
        const CurveData& c = ds.curve(curve);
        if (method == "zscore") {
            const double t = body.value("threshold", 3.0);
            sel.rows = outliers::zscore_flags(c, t);
            sel.provenance = outliers::Provenance::ZScore;
            sel.created_from = curve + " |z| > " + las::format_number(t);
        } else if (method == "iqr") {
            const double k = body.value("k", 1.5);
            sel.rows = outliers::iqr_flags(c, k);
            sel.provenance = outliers::Provenance::Iqr;
            sel.created_from = curve + " outside Tukey fences, k = " + las::format_number(k);
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown flagging method '" + method + "'");
        }
    } else if (body.contains("combine")) {
        const json& c = body.at("combine");
        const auto a = body_field<std::string>(c, "a");
        const auto b = body_field<std::string>(c, "b");
        const auto op_name = body_field<std::string>(c, "op");
        auto ia = p.selections.find(a);
        auto ib = p.selections.find(b);
        if (ia == p.selections.end()) throw Error(ErrorCode::UnknownSelection, "unknown selection '" + a + "'");
        if (ib == p.selections.end()) throw Error(ErrorCode::UnknownSelection, "unknown selection '" + b + "'");
        outliers::SetOp op;
        if (op_name == "union") op = outliers::SetOp::Union;
        else if (op_name == "intersect") op = outliers::SetOp::Intersect;
        else if (op_name == "difference") op = outliers::SetOp::Difference;
        else throw Error(ErrorCode::InvalidArgument, "unknown set operation '" + op_name + "'");
        sel = outliers::combine(ia->second, ib->second, op);
    } else if (body.contains("rows")) {
        sel.rows = outliers::normalize_rows(body_field<std::vector<std::size_t>>(body, "rows"), ds.row_count());
        sel.provenance = body.contains("provenance")
                             ? outliers::parse_provenance(body_field<std::string>(body, "provenance"))
                             : outliers::Provenance::Manual;
        sel.created_from = body.value("created_from", std::string("explicit rows"));
    } else {
        throw Error(ErrorCode::InvalidArgument, "selection needs one of rows, rect, method, or combine");
    }
    sel.well = wid;
    sel.id = "s" + std::to_string(p.next_seq++);

    p.selections.emplace(sel.id, sel);
    ++p.revision;
    try {
        persist_project(p);
    } catch (...) {
        p.selections.erase(sel.id);
        --p.revision;
        throw;
    }
    json out = codec::encode(sel);
    out["revision"] = p.revision;
    return out;
}

json Service::list_selections(const std::string& pid) const {
    auto s = slot(pid);
    std::shared_lock lock(s->mutex);
    json sels = json::array();
    for (const auto& [id, sel] : s->project.selections) sels.push_back(codec::encode(sel));
    return {{"revision", s->project.revision}, {"selections", sels}};
}

json Service::apply_selection(const std::string& pid, const std::string& sid, outliers::RemovalMode mode,
                              const std::vector<std::string>& curves) {
    auto s = slot(pid);
    std::unique_lock lock(s->mutex);
    Project& p = s->project;
    auto it = p.selections.find(sid);
    if (it == p.selections.end()) throw Error(ErrorCode::UnknownSelection, "unknown selection '" + sid + "'");
    const std::string wid = it->second.well;
    const WellDataset& ds = p.well(wid).dataset;

    outliers::SelectionSet sel = it->second;
    sel.well = ds.well();  // selections are keyed by well id; the dataset knows its own name
    outliers::RemovalResult r = outliers::apply_removal(ds, sel, mode, curves);
    return commit_well(*s, wid, std::move(r.dataset),
                       {{"report", codec::encode(r.report)},
                        {"mode", mode == outliers::RemovalMode::Mask ? "mask" : "drop"},
                        {"selection", sid}});
}

json Service::undo(const std::string& pid, const std::string& wid) {
    auto s = slot(pid);
    std::unique_lock lock(s->mutex);
    Project& p = s->project;
    WellEntry& w = p.well(wid);
    if (!w.undo) throw Error(ErrorCode::NothingToUndo, "well '" + wid + "' has nothing to undo");
    WellEntry before = w;
    w.dataset = std::move(*w.undo);
    w.undo.reset();
    ++p.revision;
    try {
        const fs::path undo_stem = data_dir_ / "projects" / p.id / "wells" / (w.id + ".undo");
        persist_well(p, w);
        persist_project(p);
        std::error_code ec;
        fs::remove(fs::path(undo_stem).concat(".bin"), ec);
        fs::remove(fs::path(undo_stem).concat(".json"), ec);
    } catch (...) {
        w = std::move(before);
        --p.revision;
        throw;
    }
    return well_payload(p, w);
}

// ---------------------------------------------------------------------------
// Service: models

json Service::train_model(const std::string& pid, const json& body) {
    const auto features = body_field<std::vector<std::string>>(body, "features");
    const auto target = body_field<std::string>(body, "target");
    model::TrainSpec spec;
    spec.kind = model::parse_kind(body.value("kind", std::string("knn_regress")));
    spec.k = body.value("k", model::kDefaultK);
    const double fraction = body.value("split_fraction", 0.8);

    auto s = slot(pid);
    std::unique_lock lock(s->mutex);
    Project& p = s->project;
    std::vector<WellDataset> sets;
    if (body.contains("wells") && !body.at("wells").empty()) {
        for (const auto& wid : body_field<std::vector<std::string>>(body, "wells")) sets.push_back(p.well(wid).dataset);
    } else {
        for (const auto& w : p.wells) sets.push_back(w.dataset);
    }
    if (sets.empty()) throw Error(ErrorCode::EmptyDataset, "project has no wells to train on");

    std::vector<std::string> cols = features;
    cols.push_back(target);
    const MultiWellTable table = concat_wells(sets, cols);
    const model::MatrixData data = model::build_matrix(table, features, target);
    const model::SplitResult split = model::depth_block_split(data.matrix, data.target, fraction);
    model::TrainedModel m = model::train(split.train.matrix, split.train.target, spec, target);
    const model::Metrics train_metrics = model::evaluate(m, split.train.matrix, split.train.target);
    const model::Metrics test_metrics = model::evaluate(m, split.test.matrix, split.test.target);

    const std::string mid = "m" + std::to_string(p.next_seq++);
    p.models.emplace(mid, std::move(m));
    ++p.revision;
    try {
        persist_project(p);
    } catch (...) {
        p.models.erase(mid);
        --p.revision;
        throw;
    }
    return {{"model_id", mid},
            {"kind", std::string(model::kind_name(spec.kind))},
            {"features", features},
            {"target", target},
            {"train", codec::encode(train_metrics)},
            {"test", codec::encode(test_metrics)},
            {"revision", p.revision}};
}

json Service::run_predict(const std::string& pid, const std::string& mid, const std::string& wid) {
    auto s = slot(pid);
    std::unique_lock lock(s->mutex);
    auto it = s->project.models.find(mid);
    if (it == s->project.models.end()) throw Error(ErrorCode::UnknownModel, "unknown model '" + mid + "'");
    WellDataset next = model::predict(it->second, s->project.well(wid).dataset);
    return commit_well(*s, wid, std::move(next),
                       {{"model_id", mid}, {"predicted_curve", model::pred_curve_name(it->second.target_name)}});
}

// ---------------------------------------------------------------------------
// Service: export and snapshots

ExportFile Service::export_data(const std::string& pid, const std::string& well, const std::string& format,
                                const std::vector<std::string>& curves) const {
    auto s = slot(pid);
    std::shared_lock lock(s->mutex);
    const Project& p = s->project;

    std::vector<const WellEntry*> entries;
    if (well.empty() || well == "ALL") {
        for (const auto& w : p.wells) entries.push_back(&w);
    } else {
        for (const auto& id : split_list(well)) entries.push_back(&p.well(id));
    }
    if (entries.empty()) throw Error(ErrorCode::EmptyDataset, "project has no wells to export");

    if (format == "las") {
        if (entries.size() != 1) {
            throw Error(ErrorCode::InvalidArgument, "LAS export holds one well; pick a well id or use format=csv");
        }
        return {las::write_las(las::dataset_to_las(entries.front()->dataset)), "application/octet-stream",
                entries.front()->id + ".las"};
    }
    if (format == "csv") {
        std::vector<WellDataset> sets;
        for (const auto* e : entries) sets.push_back(e->dataset);
        const auto names = curves.empty() ? curve_union(sets) : curves;
        return {las::merge_to_csv(sets, names).csv, "text/csv", p.id + ".csv"};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown export format '" + format + "'");
}

Project Service::snapshot(const std::string& pid) const {
    auto s = slot(pid);
    std::shared_lock lock(s->mutex);
    return s->project;
}

std::uint64_t Service::revision(const std::string& pid) const {
    auto s = slot(pid);
    std::shared_lock lock(s->mutex);
    return s->project.revision;
}

}  // namespace mlogs::service
