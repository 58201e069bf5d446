#pragma once

#include <cstdio>
#include <map>
#include <string>

#include <json.hpp>

#include "randbeta/version.hpp"

namespace randbeta::io {

/// Shortest text that round-trips a double.
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::ordered_json meta_json(const std::map<std::string, std::string>& meta) {
    nlohmann::ordered_json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    for (const auto& [k, v] : meta) m[k] = v;
    return m;
}

/// '#'-prefixed provenance header for CSV artifacts. std::map keeps the key
/// order stable so reruns are byte-identical.
inline std::string csv_header(const std::map<std::string, std::string>& meta) {
    std::string out;
    out += std::string("# ") + kToolName + " " + kToolVersion + "\n";
    for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
    return out;
}

}  // namespace randbeta::io
