#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "radlab/radial_ode.hpp"

namespace radlab {

inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { csv, json };

const char* to_string(OutputFormat f);
OutputFormat parse_format(const std::string& name);

// One reproducible run: the command, its parameters and options, and where
// the artifact goes. Every emitted artifact starts with this config echoed
// as JSON (plus the library version), so a file identifies the run that
// produced it and re-running the echo reproduces it byte for byte.
struct RunConfig {
    std::string command;
    Params params = Params(3, 2.0, 2.0, 1.0);
    std::map<std::string, std::string> options;  // command-specific, stringified
    std::string output_path;                     // empty writes to stdout
    OutputFormat format = OutputFormat::json;
    int precision = 17;  // significant digits in CSV bodies; JSON round-trips exactly
};

nlohmann::ordered_json config_to_json(const RunConfig& config);

// %.{precision}g rendering, locale-independent.
std::string format_double(double v, int precision);

// '#'-prefixed header block (config echo, termination verdict), then the
// column header r,u,du and one comma-separated row per sample.
std::string profile_csv(const RunConfig& config, const RadialProfile& profile);

nlohmann::ordered_json profile_to_json(const RadialProfile& profile);

// {"config": ..., <body fields>} serialized on one line.
std::string wrap_report(const RunConfig& config, const nlohmann::ordered_json& body);

// Reads a profile written by profile_csv (header lines ignored). Throws
// DomainError on malformed rows or when no samples are present.
RadialProfile read_profile_csv(const std::string& path);

// Relative paths land in $RADLAB_OUT_DIR when that is set; absolute paths
// and empty paths pass through.
std::string resolve_output_path(const std::string& path);

// Writes to the resolved path, or to stdout when the path is empty.
void emit(const RunConfig& config, const std::string& text);

}  // namespace radlab
