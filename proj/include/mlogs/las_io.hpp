#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mlogs/dataset.hpp"

namespace mlogs::las {

inline constexpr double kDefaultNull = -999.25;

enum class Version { V1_2, V2_0 };

struct CurveSpec {
    std::string mnemonic;
    std::string unit;
    std::string description;

    bool operator==(const CurveSpec&) const = default;
};

/// One `MNEM.UNIT VALUE : DESCRIPTION` header line.
struct HeaderEntry {
    std::string mnemonic;
    std::string unit;
    std::string value;
    std::string description;

    bool operator==(const HeaderEntry&) const = default;
};

/// In-memory image of a LAS document. `data` is row-major with one column
/// per curve and still carries the NULL sentinel.
struct LasFile {
    Version version = Version::V2_0;
    bool wrap = false;
    std::vector<HeaderEntry> well_meta;
    std::vector<CurveSpec> curves;
    std::vector<HeaderEntry> params;
    std::string other;  // ~O section, verbatim
    std::vector<std::vector<double>> data;
    std::string source_name;  // file stem, used when WELL is blank

    [[nodiscard]] const HeaderEntry* find_meta(std::string_view mnemonic) const;
    void set_meta(const std::string& mnemonic, const std::string& unit, const std::string& value,
                  const std::string& description);
    /// Parsed NULL value, or the conventional -999.25 when the entry is absent.
    [[nodiscard]] double null_value() const;

    /// Throws InvalidFile when the structural invariants do not hold.
    void validate() const;
};

/// Parses a LAS 1.2 / 2.0 document, wrapped or unwrapped.
[[nodiscard]] LasFile parse_las(std::string_view text, std::string source_name = {});
[[nodiscard]] LasFile read_las_file(const std::filesystem::path& path);

/// Emits canonical unwrapped LAS 2.0 with 6-decimal fixed-width data columns.
[[nodiscard]] std::string write_las(const LasFile& file);

[[nodiscard]] WellDataset to_dataset(const LasFile& file);
[[nodiscard]] LasFile dataset_to_las(const WellDataset& ds);

struct MergeResult {
    MultiWellTable table;
    std::string csv;
};

[[nodiscard]] MergeResult merge_to_csv(const std::vector<WellDataset>& datasets, const std::vector<std::string>& curves);

/// CSV text for an already assembled long-format table.
[[nodiscard]] std::string table_to_csv(const MultiWellTable& table);
/// Reads long-format CSV (WELL, DEPT, curves...) back into a table.
[[nodiscard]] MultiWellTable csv_to_table(std::string_view text);

/// Shortest text that parses back to exactly `v`.
[[nodiscard]] std::string format_number(double v);

}  // namespace mlogs::las
