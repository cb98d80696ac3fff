#include "pdc/config_io.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace pdc {

namespace {

using nlohmann::json;

double require_number(const json& obj, const std::string& section, const std::string& key) {
    if (!obj.contains(key))
        throw ConfigError("config: missing key '" + key + "' in \"" + section + "\"");
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError("config: key '" + key + "' in \"" + section + "\" must be a number");
    return v.get<double>();
}

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("config: unknown key '" + key + "' in \"" + section + "\"");
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

LoadedConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(doc, "<top level>", {"phase_match", "geometry"});
    if (!doc.contains("phase_match") || !doc.contains("geometry"))
        throw ConfigError("config: requires \"phase_match\" and \"geometry\" objects");

    const json& pm = doc.at("phase_match");
    const json& ge = doc.at("geometry");
    if (!pm.is_object() || !ge.is_object())
        throw ConfigError("config: \"phase_match\" and \"geometry\" must be objects");
    reject_unknown(pm, "phase_match",
                   {"K_p", "K_s", "K_i", "N_p", "N_s", "D", "theta_i", "theta_s", "L"});
    reject_unknown(ge, "geometry", {"w_p", "w_o1", "w_o2", "M_3", "M_4", "w_ap", "k_fresnel"});

    LoadedConfig out;
    out.digest = fnv1a64(text);
    out.phase_match.K_p = require_number(pm, "phase_match", "K_p");
    out.phase_match.K_s = require_number(pm, "phase_match", "K_s");
    out.phase_match.K_i = require_number(pm, "phase_match", "K_i");
    out.phase_match.N_p = require_number(pm, "phase_match", "N_p");
    out.phase_match.N_s = require_number(pm, "phase_match", "N_s");
    out.phase_match.D = require_number(pm, "phase_match", "D");
    out.phase_match.theta_i = require_number(pm, "phase_match", "theta_i");
    out.phase_match.theta_s = require_number(pm, "phase_match", "theta_s");
    out.phase_match.L = require_number(pm, "phase_match", "L");

    out.geometry.w_p = require_number(ge, "geometry", "w_p");
    out.geometry.w_o1 = require_number(ge, "geometry", "w_o1");
    out.geometry.w_o2 = require_number(ge, "geometry", "w_o2");
    out.geometry.M_3 = ge.contains("M_3") ? require_number(ge, "geometry", "M_3") : 1.0;
    out.geometry.M_4 = ge.contains("M_4") ? require_number(ge, "geometry", "M_4") : 1.0;
    if (ge.contains("w_ap")) out.geometry.w_ap = require_number(ge, "geometry", "w_ap");
    if (ge.contains("k_fresnel"))
        out.geometry.k_fresnel = require_number(ge, "geometry", "k_fresnel");
    return out;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace pdc
