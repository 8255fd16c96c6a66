#include "radlab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "radlab/errors.hpp"

namespace radlab {

const char* to_string(OutputFormat f) {
    return f == OutputFormat::csv ? "csv" : "json";
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw DomainError("unknown output format '" + name + "' (expected csv or json)");
}

nlohmann::ordered_json config_to_json(const RunConfig& config) {
    nlohmann::ordered_json doc;
    doc["command"] = config.command;
    doc["params"] = {{"N", config.params.N},
                     {"p", config.params.p},
                     {"q", config.params.q},
                     {"m", config.params.m}};
    doc["options"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : config.options) doc["options"][key] = value;
    doc["output"] = {{"path", config.output_path}, {"format", to_string(config.format)}};
    doc["precision"] = config.precision;
    doc["version"] = kVersion;
    return doc;
}

std::string format_double(double v, int precision) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

std::string profile_csv(const RunConfig& config, const RadialProfile& profile) {
    std::string out = "# " + config_to_json(config).dump() + "\n";
    out += "# termination " + to_string(profile.termination);
    if (!profile.diagnostic.empty()) out += " (" + profile.diagnostic + ")";
    out += "\nr,u,du\n";
    for (std::size_t i = 0; i < profile.r.size(); ++i) {
        out += format_double(profile.r[i], config.precision);
        out += ",";
        out += format_double(profile.u[i], config.precision);
        out += ",";
        out += i < profile.du.size() ? format_double(profile.du[i], config.precision)
                                     : std::string("nan");
        out += "\n";
    }
    return out;
}

nlohmann::ordered_json profile_to_json(const RadialProfile& profile) {
    nlohmann::ordered_json doc;
    doc["termination"] = to_string(profile.termination);
    if (!profile.diagnostic.empty()) doc["diagnostic"] = profile.diagnostic;
    doc["n"] = profile.r.size();
    doc["r"] = profile.r;
    doc["u"] = profile.u;
    doc["du"] = profile.du;
    return doc;
}

std::string wrap_report(const RunConfig& config, const nlohmann::ordered_json& body) {
    nlohmann::ordered_json doc;
    doc["config"] = config_to_json(config);
    for (const auto& [key, value] : body.items()) doc[key] = value;
    return doc.dump() + "\n";
}

RadialProfile read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open profile file '" + path + "'");
    RadialProfile prof;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'r') continue;
        double r, u, du;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &u, &du) != 3)
            throw DomainError("malformed profile row '" + line + "' in " + path);
        prof.r.push_back(r);
        prof.u.push_back(u);
        prof.du.push_back(du);
    }
    if (prof.r.empty()) throw DomainError("profile file '" + path + "' holds no samples");
    return prof;
}

std::string resolve_output_path(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("RADLAB_OUT_DIR");
    if (dir == nullptr || *dir == '\0') return path;
    std::string out = dir;
    if (out.back() != '/') out += '/';
    return out + path;
}

void emit(const RunConfig& config, const std::string& text) {
    const std::string path = resolve_output_path(config.output_path);
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw DomainError("write failed for output file '" + path + "'");
}

}  // namespace radlab
