#pragma once

#include "uedge/study.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace uedge {

enum class ReportFormat { Csv, Json };

/// CSV header: family,theta,n,rep,s,metric,value,mc_se,flag,seed
std::string report_csv(const StudyReport& r);
/// JSON: version, config_hash, records, slopes, notes.
std::string report_json(const StudyReport& r);

/// Throws IoError with the path on failure.
void emit_report(const StudyReport& r, ReportFormat format, const std::filesystem::path& path);

/// Inverse of report_csv (records only). Throws InvalidArgument on malformed input.
std::vector<StudyRecord> parse_report_csv(std::string_view text);
/// Inverse of report_json.
StudyReport parse_report_json(std::string_view text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

} // namespace uedge
