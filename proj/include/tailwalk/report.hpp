#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace tailwalk {

/// Tool version baked in at build time.
std::string tool_version();

/// Provenance block carried by every output file.
struct ReportHeader {
    std::string command;
    std::string config_hash;
    std::string version = tool_version();
};

/// 17 significant digits ("%.17g"), so reruns compare byte-for-byte.
std::string format_number(double v);

/// CSV text: '#'-prefixed header lines, the column line, then rows.
class CsvTable {
public:
    CsvTable(ReportHeader header, std::vector<std::string> columns);
    CsvTable& add(double v);
    CsvTable& add(long v);
    CsvTable& add(const std::string& v);
    /// Ends the current row; DomainError if the cell count differs from the columns.
    void end_row();
    std::string str() const;
    std::size_t rows() const { return rows_; }

private:
    ReportHeader header_;
    std::vector<std::string> columns_;
    std::vector<std::string> cells_;
    std::string body_;
    std::size_t rows_ = 0;
};

/// JSON document with "tool_version", "config_hash" and "command" first.
std::string render_json(const ReportHeader& header, const nlohmann::ordered_json& body);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& text);

}  // namespace tailwalk
