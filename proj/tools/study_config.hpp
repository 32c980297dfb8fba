#pragma once

#include <uedge/study.hpp>

#include <filesystem>
#include <optional>
#include <string_view>

namespace uedge::cli {

struct OutputPaths {
    std::optional<std::filesystem::path> csv;
    std::optional<std::filesystem::path> json;
};

struct RateStudyFile {
    RateStudyConfig study;
    OutputPaths output;
};

struct SweepFile {
    SweepConfig sweep;
    OutputPaths output;
};

/// See docs/config.md for the schema. Throws InvalidArgument on bad input.
RateStudyFile parse_rate_study_config(std::string_view json_text);
SweepFile parse_sweep_config(std::string_view json_text);

/// "lo:hi:step" -> grid.
std::vector<double> parse_grid_spec(std::string_view spec);

/// Relative paths resolve against $UEDGE_OUTPUT_DIR (default: current directory).
std::filesystem::path resolve_output(const std::filesystem::path& p);

} // namespace uedge::cli
