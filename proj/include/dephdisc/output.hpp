#pragma once

// Result carriers and serialization for the CLI: sweep tables with a
// metadata header, written as CSV (12 significant digits, `#` metadata
// lines) or JSON ({metadata, rows}).

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dephdisc::output {

inline constexpr const char* kToolVersion = "dephdisc 1.0.0";

enum class Format { csv, json };

// Exit codes shared with the CLI front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitVerification = 4;

/// One sweep table: named columns, numeric rows sorted by the sweep
/// variable (first column), and ordered metadata echoed into every output.
struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_meta(const std::string& key, const std::string& value) {
        metadata.emplace_back(key, value);
    }
    void add_meta(const std::string& key, double value);
    void add_meta(const std::string& key, std::int64_t value) {
        metadata.emplace_back(key, std::to_string(value));
    }
};

/// 12-significant-digit decimal rendering used for all data cells.
inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline void SweepResult::add_meta(const std::string& key, double value) {
    metadata.emplace_back(key, format_number(value));
}

inline void write_csv(const SweepResult& result, std::ostream& os) {
    for (const auto& [key, value] : result.metadata) os << "# " << key << " = " << value << "\n";
    for (std::size_t c = 0; c < result.columns.size(); ++c)
        os << result.columns[c] << (c + 1 < result.columns.size() ? "," : "");
    os << "\n";
    for (const auto& row : result.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << format_number(row[c]) << (c + 1 < row.size() ? "," : "");
        os << "\n";
    }
}

inline void write_json(const SweepResult& result, std::ostream& os) {
    nlohmann::json j;
    j["metadata"] = nlohmann::json::object();
    for (const auto& [key, value] : result.metadata) j["metadata"][key] = value;
    j["columns"] = result.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : result.rows) {
        nlohmann::json jrow = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size() && c < result.columns.size(); ++c)
            jrow[result.columns[c]] = row[c];
        j["rows"].push_back(std::move(jrow));
    }
    os << j.dump(2) << "\n";
}

inline void write_result(const SweepResult& result, Format format, std::ostream& os) {
    if (format == Format::csv)
        write_csv(result, os);
    else
        write_json(result, os);
}

inline void write_result_file(const SweepResult& result, Format format, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    write_result(result, format, os);
}

}  // namespace dephdisc::output
