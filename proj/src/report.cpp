#include "tailwalk/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tailwalk/errors.hpp"

#ifndef TAILWALK_VERSION
#define TAILWALK_VERSION "unknown"
#endif

namespace tailwalk {

std::string tool_version() { return TAILWALK_VERSION; }

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTable::CsvTable(ReportHeader header, std::vector<std::string> columns)
    : header_(std::move(header)), columns_(std::move(columns)) {}

CsvTable& CsvTable::add(double v) {
    cells_.push_back(format_number(v));
    return *this;
}

CsvTable& CsvTable::add(long v) {
    cells_.push_back(std::to_string(v));
    return *this;
}

CsvTable& CsvTable::add(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) {
        cells_.push_back(v);
        return *this;
    }
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    cells_.push_back(q + "\"");
    return *this;
}

void CsvTable::end_row() {
    if (cells_.size() != columns_.size()) {
        throw DomainError("CSV row has " + std::to_string(cells_.size()) + " cells, expected " +
                          std::to_string(columns_.size()));
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) body_ += (i ? "," : "") + cells_[i];
    body_ += "\n";
    cells_.clear();
    ++rows_;
}

std::string CsvTable::str() const {
    std::string out = "# tool_version: " + header_.version + "\n# config_hash: " + header_.config_hash +
                      "\n# command: " + header_.command + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
    return out + "\n" + body_;
}

std::string render_json(const ReportHeader& header, const nlohmann::ordered_json& body) {
    nlohmann::ordered_json doc;
    doc["tool_version"] = header.version;
    doc["config_hash"] = header.config_hash;
    doc["command"] = header.command;
    for (const auto& [k, v] : body.items()) doc[k] = v;
    return doc.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + path + "'");
    out << text;
}

}  // namespace tailwalk
