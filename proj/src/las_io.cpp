#include "mlogs/las_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "mlogs/error.hpp"

namespace mlogs::las {

namespace {

const std::set<std::string, std::less<>> kRequiredMeta{"STRT", "STOP", "STEP", "NULL", "WELL"};

std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

// Replaces invalid UTF-8 sequences with U+FFFD so header text is always
// safe to hand to JSON encoders.
std::string sanitize_utf8(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        if (c < 0x80) len = 1;
        else if ((c >> 5) == 0x6) len = 2;
        else if ((c >> 4) == 0xE) len = 3;
        else if ((c >> 3) == 0x1E) len = 4;
        bool ok = len > 0 && i + len <= s.size();
        for (std::size_t k = 1; ok && k < len; ++k) {
            ok = (static_cast<unsigned char>(s[i + k]) >> 6) == 0x2;
        }
        if (ok) {
            out.append(s.substr(i, len));
            i += len;
        } else {
            out.append("\xEF\xBF\xBD");
            ++i;
        }
    }
    return out;
}

std::optional<double> parse_double(std::string_view tok) {
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    if (tok.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
    return v;
}

struct Line {
    std::size_t number;
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t start = 0;
    std::size_t number = 1;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n' || text[i] == '\r') {
            lines.push_back({number++, text.substr(start, i - start)});
            if (i < text.size() && text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            start = i + 1;
        }
    }
    return lines;
}

std::string clean_mnemonic(std::string_view raw) {
    std::string out;
    for (char c : trim(raw)) out.push_back(std::isspace(static_cast<unsigned char>(c)) ? '_' : c);
    return out;
}

// mnemonic up to first '.', unit up to first whitespace after the dot,
// value up to the last ':', description after it.
HeaderEntry parse_header_line(const Line& line) {
    const std::string_view s = line.text;
    const auto dot = s.find('.');
    const auto colon = s.rfind(':');
    if (dot == std::string_view::npos || colon == std::string_view::npos || colon < dot) {
        fail_at_line(ErrorCode::MalformedHeaderLine, line.number,
                     "line " + std::to_string(line.number) + ": header line needs '.' and ':' delimiters");
    }
    HeaderEntry e;
    e.mnemonic = clean_mnemonic(s.substr(0, dot));
    if (e.mnemonic.empty()) {
        fail_at_line(ErrorCode::MalformedHeaderLine, line.number,
                     "line " + std::to_string(line.number) + ": empty mnemonic");
    }
    std::size_t unit_end = dot + 1;
    while (unit_end < colon && !std::isspace(static_cast<unsigned char>(s[unit_end]))) ++unit_end;
    e.unit = sanitize_utf8(s.substr(dot + 1, unit_end - dot - 1));
    e.value = sanitize_utf8(trim(s.substr(unit_end, colon - unit_end)));
    e.description = sanitize_utf8(trim(s.substr(colon + 1)));
    return e;
}

enum class Section { None, Version, Well, Curve, Param, Other, Ascii, Unknown };

Section section_of(std::string_view line) {
    const auto body = trim(line).substr(1);
    if (body.empty()) return Section::Unknown;
    switch (std::toupper(static_cast<unsigned char>(body.front()))) {
        case 'V': return Section::Version;
        case 'W': return Section::Well;
        case 'C': return Section::Curve;
        case 'P': return Section::Param;
        case 'O': return Section::Other;
        case 'A': return Section::Ascii;
        default: return Section::Unknown;
    }
}

std::string line_error(std::size_t n, const std::string& msg) { return "line " + std::to_string(n) + ": " + msg; }

// Deduplicates curve mnemonics: later repeats of NAME become NAME_1, NAME_2, ...
void dedupe_mnemonics(std::vector<CurveSpec>& curves) {
    std::set<std::string> taken;
    for (const auto& c : curves) taken.insert(c.mnemonic);
    std::set<std::string> used;
    for (auto& c : curves) {
        if (used.insert(c.mnemonic).second) continue;
        int n = 1;
        std::string candidate;
        do {
            candidate = c.mnemonic + "_" + std::to_string(n++);
        } while (taken.count(candidate) != 0 || used.count(candidate) != 0);
        c.mnemonic = candidate;
        used.insert(candidate);
    }
}

void append_padded(std::string& out, std::string_view s, std::size_t width) {
    out.append(s);
    if (s.size() < width) out.append(width - s.size(), ' ');
}

void write_header_section(std::string& out, const std::vector<HeaderEntry>& entries) {
    std::size_t name_w = 0;
    std::size_t value_w = 0;
    for (const auto& e : entries) {
        name_w = std::max(name_w, e.mnemonic.size() + 1 + e.unit.size());
        value_w = std::max(value_w, e.value.size());
    }
    for (const auto& e : entries) {
        std::string desc = e.description;
        // a colon in the description would move the value/description split
        std::replace(desc.begin(), desc.end(), ':', ';');
        out.push_back(' ');
        append_padded(out, e.mnemonic + "." + e.unit, name_w);
        out.append("  ");
        append_padded(out, e.value, value_w);
        out.append(" : ");
        out.append(desc);
        // strip trailing blank from an empty description
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out.push_back('\n');
    }
}

std::string fixed6(double v) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%.6f", v);
    if (n > 0 && static_cast<std::size_t>(n) < sizeof buf) return std::string(buf, static_cast<std::size_t>(n));
    std::string big(static_cast<std::size_t>(n) + 1, '\0');
    std::snprintf(big.data(), big.size(), "%.6f", v);
    big.pop_back();
    return big;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::string> split_csv_record(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) fail_at_line(ErrorCode::MalformedCsv, line_no, line_error(line_no, "unterminated quoted field"));
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

// ---------------------------------------------------------------------------
// LasFile

const HeaderEntry* LasFile::find_meta(std::string_view mnemonic) const {
    const std::string key = upper(mnemonic);
    for (const auto& e : well_meta) {
        if (upper(e.mnemonic) == key) return &e;
    }
    return nullptr;
}

void LasFile::set_meta(const std::string& mnemonic, const std::string& unit, const std::string& value,
                       const std::string& description) {
    for (auto& e : well_meta) {
        if (upper(e.mnemonic) == mnemonic) {
            e = {mnemonic, unit, value, description};
            return;
        }
    }
    well_meta.push_back({mnemonic, unit, value, description});
}

double LasFile::null_value() const {
    const HeaderEntry* e = find_meta("NULL");
    if (e == nullptr) return kDefaultNull;
    auto v = parse_double(e->value);
    if (!v || !std::isfinite(*v)) throw Error(ErrorCode::InvalidFile, "NULL value '" + e->value + "' is not a finite number");
    return *v;
}

void LasFile::validate() const {
    if (curves.empty()) throw Error(ErrorCode::InvalidFile, "LAS file has no curves");
    std::set<std::string> names;
    for (const auto& c : curves) {
        if (!is_valid_mnemonic(c.mnemonic)) {
            fail_on_curve(ErrorCode::InvalidFile, c.mnemonic, "invalid curve mnemonic '" + c.mnemonic + "'");
        }
        if (!names.insert(c.mnemonic).second) {
            fail_on_curve(ErrorCode::InvalidFile, c.mnemonic, "duplicate curve mnemonic '" + c.mnemonic + "'");
        }
    }
    for (std::size_t r = 0; r < data.size(); ++r) {
        if (data[r].size() != curves.size()) {
            throw Error(ErrorCode::InvalidFile, "data row " + std::to_string(r) + " has " +
                                                    std::to_string(data[r].size()) + " values, expected " +
                                                    std::to_string(curves.size()));
        }
    }
    (void)null_value();
}

// ---------------------------------------------------------------------------
// parsing

LasFile parse_las(std::string_view text, std::string source_name) {
    LasFile file;
    file.source_name = std::move(source_name);

    bool saw_curve = false;
    bool saw_ascii = false;
    Section section = Section::None;
    std::vector<double> pending;  // wrapped row under assembly
    std::size_t pending_line = 0;
    std::string other;

    const auto lines = split_lines(text);
    // ~V must be known before data rows are interpreted, but it is
    // conventionally first, so a single pass suffices.
    for (const Line& line : lines) {
        const std::string_view t = trim(line.text);
        if (t.empty()) continue;
        if (t.front() == '#' && section != Section::Other) continue;
        if (t.front() == '~') {
            section = section_of(t);
            if (section == Section::Curve) saw_curve = true;
            if (section == Section::Ascii) {
                saw_ascii = true;
                if (!saw_curve) {
                    fail_at_line(ErrorCode::MissingSection, line.number,
                                 line_error(line.number, "~A section before ~C section"));
                }
                dedupe_mnemonics(file.curves);
            }
            continue;
        }
        switch (section) {
            case Section::None:
                fail_at_line(ErrorCode::MalformedHeaderLine, line.number,
                             line_error(line.number, "content before the first section"));
            case Section::Version: {
                HeaderEntry e = parse_header_line(line);
                const std::string key = upper(e.mnemonic);
                if (key == "VERS") {
                    auto v = parse_double(e.value);
                    if (v && std::abs(*v - 1.2) < 1e-9) {
                        file.version = Version::V1_2;
                    } else if (v && std::abs(*v - 2.0) < 1e-9) {
                        file.version = Version::V2_0;
                    } else {
                        fail_at_line(ErrorCode::UnsupportedVersion, line.number,
                                     line_error(line.number, "unsupported LAS version '" + e.value + "'"));
                    }
                } else if (key == "WRAP") {
                    const std::string w = upper(e.value);
                    if (w == "YES") file.wrap = true;
                    else if (w == "NO") file.wrap = false;
                    else fail_at_line(ErrorCode::MalformedHeaderLine, line.number,
                                      line_error(line.number, "WRAP must be YES or NO"));
                }
                break;
            }
            case Section::Well: {
                HeaderEntry e = parse_header_line(line);
                if (upper(e.mnemonic) == "NULL") {
                    auto v = parse_double(e.value);
                    if (!v || !std::isfinite(*v)) {
                        fail_at_line(ErrorCode::MalformedHeaderLine, line.number,
                                     line_error(line.number, "NULL value '" + e.value + "' is not a number"));
                    }
                }
                file.well_meta.push_back(std::move(e));
                break;
            }
            case Section::Curve: {
                HeaderEntry e = parse_header_line(line);
                file.curves.push_back({e.mnemonic, e.unit, e.description});
                break;
            }
            case Section::Param:
                file.params.push_back(parse_header_line(line));
                break;
            case Section::Other:
                other.append(sanitize_utf8(line.text));
                other.push_back('\n');
                break;
            case Section::Ascii: {
                const std::size_t ncol = file.curves.size();
                std::size_t count = 0;
                std::size_t pos = 0;
                std::vector<double> row;
                while (pos < t.size()) {
                    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
                    if (pos >= t.size()) break;
                    std::size_t end = pos;
                    while (end < t.size() && !std::isspace(static_cast<unsigned char>(t[end]))) ++end;
                    auto v = parse_double(t.substr(pos, end - pos));
                    if (!v) {
                        fail_at_line(ErrorCode::MalformedValue, line.number,
                                     line_error(line.number, "bad numeric value '" +
                                                                 sanitize_utf8(t.substr(pos, end - pos)) + "'"));
                    }
                    row.push_back(*v);
                    ++count;
                    pos = end;
                }
                if (!file.wrap) {
                    if (count != ncol) {
                        fail_at_line(ErrorCode::ColumnMismatch, line.number,
                                     line_error(line.number, "expected " + std::to_string(ncol) + " values, found " +
                                                                 std::to_string(count)));
                    }
                    file.data.push_back(std::move(row));
                } else {
                    if (pending.empty()) pending_line = line.number;
                    pending.insert(pending.end(), row.begin(), row.end());
                    if (pending.size() > ncol) {
                        fail_at_line(ErrorCode::ColumnMismatch, line.number,
                                     line_error(line.number, "wrapped row starting at line " +
                                                                 std::to_string(pending_line) + " has more than " +
                                                                 std::to_string(ncol) + " values"));
                    }
                    if (pending.size() == ncol) {
                        file.data.push_back(std::move(pending));
                        pending.clear();
                    }
                }
                break;
            }
            case Section::Unknown:
                break;
        }
    }

    if (!saw_curve) throw Error(ErrorCode::MissingSection, "document has no ~C (curve) section");
    if (!saw_ascii) throw Error(ErrorCode::MissingSection, "document has no ~A (data) section");
    if (file.curves.empty()) throw Error(ErrorCode::MissingSection, "~C section defines no curves");
    if (!pending.empty()) {
        fail_at_line(ErrorCode::ColumnMismatch, pending_line,
                     line_error(pending_line, "wrapped row has " + std::to_string(pending.size()) +
                                                  " values, expected " + std::to_string(file.curves.size())));
    }
    if (file.version == Version::V1_2) {
        // 1.2 ~W lines carry the value after the colon: "WELL. WELL : ANY ET AL #12"
        for (auto& e : file.well_meta) {
            const std::string key = upper(e.mnemonic);
            if (key == "STRT" || key == "STOP" || key == "STEP" || key == "NULL" || e.description.empty()) continue;
            std::swap(e.value, e.description);
        }
    }
    file.other = std::move(other);
    return file;
}

LasFile read_las_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_las(ss.str(), path.stem().string());
}

// ---------------------------------------------------------------------------
// writing

std::string write_las(const LasFile& file) {
    file.validate();
    const double null = file.null_value();
    const HeaderEntry* null_entry = file.find_meta("NULL");
    const std::string null_text = null_entry ? std::string(null_entry->value) : fixed6(null);

    std::string out;
    out.append("~Version information\n");
    write_header_section(out, {{"VERS", "", "2.0", "CWLS LOG ASCII STANDARD - VERSION 2.0"},
                               {"WRAP", "", "NO", "ONE LINE PER DEPTH STEP"}});
    out.append("~Well information\n");
    write_header_section(out, file.well_meta);
    out.append("~Curve information\n");
    std::vector<HeaderEntry> curve_entries;
    curve_entries.reserve(file.curves.size());
    for (const auto& c : file.curves) curve_entries.push_back({c.mnemonic, c.unit, "", c.description});
    write_header_section(out, curve_entries);
    if (!file.params.empty()) {
        out.append("~Parameter information\n");
        write_header_section(out, file.params);
    }
    if (!file.other.empty()) {
        out.append("~Other information\n");
        out.append(file.other);
        if (out.back() != '\n') out.push_back('\n');
    }

    std::vector<std::vector<std::string>> cells(file.data.size());
    std::size_t width = 10;
    for (std::size_t r = 0; r < file.data.size(); ++r) {
        cells[r].reserve(file.curves.size());
        for (double v : file.data[r]) {
            cells[r].push_back(v == null ? null_text : fixed6(v));
            width = std::max(width, cells[r].back().size() + 1);
        }
    }
    for (const auto& c : file.curves) width = std::max(width, c.mnemonic.size() + 1);

    out.append("~A");
    for (const auto& c : file.curves) {
        out.append(width - c.mnemonic.size(), ' ');
        out.append(c.mnemonic);
    }
    out.push_back('\n');
    for (const auto& row : cells) {
        for (const auto& cell : row) {
            out.append(width - cell.size(), ' ');
            out.append(cell);
        }
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// dataset conversion

WellDataset to_dataset(const LasFile& file) {
    file.validate();
    const double null = file.null_value();

    std::vector<std::size_t> kept;
    for (std::size_t r = 0; r < file.data.size(); ++r) {
        const double d = file.data[r][0];
        if (d != null && std::isfinite(d)) kept.push_back(r);
    }

    bool decreasing = false;
    if (kept.size() >= 2) {
        bool inc = true;
        bool dec = true;
        for (std::size_t i = 1; i < kept.size(); ++i) {
            const double a = file.data[kept[i - 1]][0];
            const double b = file.data[kept[i]][0];
            if (a == b) {
                throw Error(ErrorCode::DuplicateDepth,
                            "duplicate depth " + format_number(a) + " at data rows " + std::to_string(kept[i - 1]) +
                                " and " + std::to_string(kept[i]),
                            ErrorLocation{std::nullopt, file.curves[0].mnemonic});
            }
            inc = inc && b > a;
            dec = dec && b < a;
        }
        if (!inc && !dec) {
            throw Error(ErrorCode::NonMonotoneDepth, "depth is neither strictly increasing nor strictly decreasing",
                        ErrorLocation{std::nullopt, file.curves[0].mnemonic});
        }
        decreasing = dec;
    }
    if (decreasing) std::reverse(kept.begin(), kept.end());

    std::vector<double> depth;
    depth.reserve(kept.size());
    for (std::size_t r : kept) depth.push_back(file.data[r][0]);

    std::string well;
    if (const HeaderEntry* e = file.find_meta("WELL")) well = std::string(trim(e->value));
    if (well.empty()) well = file.source_name;
    if (well.empty()) well = "WELL";

    WellDataset ds(well, std::move(depth), file.curves[0].unit, file.curves[0].mnemonic);
    for (std::size_t c = 1; c < file.curves.size(); ++c) {
        std::vector<double> values(kept.size());
        std::vector<bool> missing(kept.size(), false);
        for (std::size_t i = 0; i < kept.size(); ++i) {
            const double v = file.data[kept[i]][c];
            values[i] = v;
            missing[i] = v == null || !std::isfinite(v);
        }
        ds.put_curve(file.curves[c].mnemonic, CurveData(std::move(values), std::move(missing), file.curves[c].unit));
    }

    std::vector<MetaEntry> meta;
    for (const auto& e : file.well_meta) {
        if (kRequiredMeta.count(upper(e.mnemonic)) != 0) continue;
        meta.push_back({e.mnemonic, e.unit, e.value, e.description});
    }
    ds.set_metadata(std::move(meta));
    return ds;
}

LasFile dataset_to_las(const WellDataset& ds) {
    if (ds.row_count() == 0) throw Error(ErrorCode::EmptyDataset, "dataset '" + ds.well() + "' has no rows");
    const auto& depth = ds.depth();
    const std::size_t n = depth.size();

    double step = 0.0;
    if (n >= 2) {
        const double first = depth[1] - depth[0];
        bool regular = true;
        for (std::size_t i = 2; i < n && regular; ++i) {
            regular = std::abs((depth[i] - depth[i - 1]) - first) <= 1e-6 * std::abs(first);
        }
        if (regular) step = (depth[n - 1] - depth[0]) / static_cast<double>(n - 1);
    }

    LasFile file;
    file.version = Version::V2_0;
    file.wrap = false;
    const std::string& du = ds.depth_unit();
    file.well_meta.push_back({"STRT", du, format_number(depth.front()), "START DEPTH"});
    file.well_meta.push_back({"STOP", du, format_number(depth.back()), "STOP DEPTH"});
    file.well_meta.push_back({"STEP", du, format_number(step), "STEP"});
    file.well_meta.push_back({"NULL", "", format_number(kDefaultNull), "NULL VALUE"});
    file.well_meta.push_back({"WELL", "", ds.well(), "WELL"});
    for (const auto& m : ds.metadata()) file.well_meta.push_back({m.mnemonic, m.unit, m.value, m.description});

    file.curves.push_back({ds.depth_name(), du, "DEPTH"});
    for (const auto& c : ds.curves()) file.curves.push_back({c.name, c.data.unit, ""});

    file.data.assign(n, std::vector<double>(file.curves.size(), kDefaultNull));
    for (std::size_t r = 0; r < n; ++r) {
        file.data[r][0] = depth[r];
        for (std::size_t c = 0; c < ds.curves().size(); ++c) {
            const CurveData& cd = ds.curves()[c].data;
            if (!cd.is_missing(r)) file.data[r][c + 1] = cd.values[r];
        }
    }
    return file;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return fixed6(v);
    return std::string(buf, ptr);
}

std::string table_to_csv(const MultiWellTable& table) {
    std::string out;
    const auto cols = table.columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i != 0) out.push_back(',');
        out.append(csv_field(cols[i]));
    }
    out.push_back('\n');
    for (const auto& row : table.rows) {
        out.append(csv_field(row.well));
        out.push_back(',');
        out.append(format_number(row.depth));
        for (const auto& v : row.values) {
            out.push_back(',');
            if (v) out.append(format_number(*v));
        }
        out.push_back('\n');
    }
    return out;
}

MergeResult merge_to_csv(const std::vector<WellDataset>& datasets, const std::vector<std::string>& curves) {
    MergeResult result;
    result.table = concat_wells(datasets, curves);
    result.csv = table_to_csv(result.table);
    return result;
}

MultiWellTable csv_to_table(std::string_view text) {
    const auto lines = split_lines(text);
    MultiWellTable table;
    bool header_done = false;
    std::size_t ncols = 0;
    std::vector<std::pair<std::string, std::size_t>> per_well;  // running row index per well

    for (const Line& line : lines) {
        if (trim(line.text).empty()) continue;
        auto fields = split_csv_record(line.text, line.number);
        if (!header_done) {
            if (fields.size() < 3 || upper(trim(fields[0])) != "WELL" || upper(trim(fields[1])) != "DEPT") {
                fail_at_line(ErrorCode::MalformedCsv, line.number,
                             line_error(line.number, "header must start with WELL,DEPT followed by curves"));
            }
            for (std::size_t i = 2; i < fields.size(); ++i) {
                std::string name(trim(fields[i]));
                if (!is_valid_mnemonic(name) || table.column_index(name)) {
                    fail_at_line(ErrorCode::MalformedCsv, line.number,
                                 line_error(line.number, "invalid or duplicate column '" + name + "'"));
                }
                table.curve_names.push_back(std::move(name));
            }
            ncols = fields.size();
            header_done = true;
            continue;
        }
        if (fields.size() != ncols) {
            fail_at_line(ErrorCode::MalformedCsv, line.number,
                         line_error(line.number, "expected " + std::to_string(ncols) + " fields, found " +
                                                     std::to_string(fields.size())));
        }
        MultiWellRow row;
        row.well = fields[0];
        auto depth = parse_double(fields[1]);
        if (!depth || !std::isfinite(*depth)) {
            fail_at_line(ErrorCode::MalformedCsv, line.number, line_error(line.number, "bad DEPT value"));
        }
        row.depth = *depth;
        auto it = std::find_if(per_well.begin(), per_well.end(), [&](const auto& p) { return p.first == row.well; });
        if (it == per_well.end()) {
            per_well.emplace_back(row.well, 0);
            it = per_well.end() - 1;
        }
        row.row_index = it->second++;
        for (std::size_t i = 2; i < fields.size(); ++i) {
            if (trim(fields[i]).empty()) {
                row.values.emplace_back(std::nullopt);
                continue;
            }
            auto v = parse_double(fields[i]);
            if (!v) {
                fail_at_line(ErrorCode::MalformedCsv, line.number,
                             line_error(line.number, "bad value '" + fields[i] + "' in column " +
                                                         table.curve_names[i - 2]));
            }
            row.values.emplace_back(std::isfinite(*v) ? std::optional<double>(*v) : std::nullopt);
        }
        table.rows.push_back(std::move(row));
    }
    if (!header_done) throw Error(ErrorCode::MalformedCsv, "CSV has no header row");
    return table;
}

}  // namespace mlogs::las
