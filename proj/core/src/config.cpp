#include "aoif/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aoif/errors.hpp"

namespace aoif {

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& path, const char* key,
                  bool required = true, double fallback = 0.0) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(path + "." + key, "missing required number");
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
    return v.get<double>();
}

PhaseType parse_service(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected a service object");
    if (!j.contains("type")) throw ConfigError(path + ".type", "missing service type");
    const std::string type = j.at("type").is_string() ? j.at("type").get<std::string>() : "";

    try {
        if (type == "erlang") {
            const double mean = get_number(j, path, "mean");
            const double order = get_number(j, path, "order");
            if (order < 1.0 || order != std::floor(order))
                throw ConfigError(path + ".order", "expected a positive integer");
            return PhaseType::erlang(mean, static_cast<std::size_t>(order));
        }
        if (type == "hyperexp_balanced")
            return PhaseType::hyperexp_balanced(get_number(j, path, "mean"),
                                                get_number(j, path, "scv"));
        if (type == "fit")
            return PhaseType::fit_two_moments(get_number(j, path, "mean"),
                                              get_number(j, path, "scv"));
        if (type == "ph") {
            if (!j.contains("sigma") || !j.at("sigma").is_array())
                throw ConfigError(path + ".sigma", "expected an array of probabilities");
            Vec sigma;
            for (const json& v : j.at("sigma")) {
                if (!v.is_number()) throw ConfigError(path + ".sigma", "expected numbers");
                sigma.push_back(v.get<double>());
            }
            if (!j.contains("S") || !j.at("S").is_array())
                throw ConfigError(path + ".S", "expected a square array of arrays");
            const json& rows = j.at("S");
            Matrix s(sigma.size(), sigma.size());
            if (rows.size() != sigma.size())
                throw ConfigError(path + ".S", "row count must match sigma length");
            for (std::size_t i = 0; i < sigma.size(); ++i) {
                const json& row = rows.at(i);
                if (!row.is_array() || row.size() != sigma.size())
                    throw ConfigError(path + ".S", "rows must match sigma length");
                for (std::size_t k = 0; k < sigma.size(); ++k) {
                    if (!row.at(k).is_number()) throw ConfigError(path + ".S", "expected numbers");
                    s(i, k) = row.at(k).get<double>();
                }
            }
            return PhaseType(std::move(sigma), std::move(s));
        }
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + ".type",
                      "unknown service type '" + type +
                          "' (expected erlang, hyperexp_balanced, fit or ph)");
}

Matrix parse_preemption(const json& j, std::size_t n) {
    if (j.is_object()) {
        if (!j.contains("preset") || !j.at("preset").is_string())
            throw ConfigError("preemption.preset", "expected a preset name");
        const std::string name = j.at("preset").get<std::string>();
        if (name == "global") return preset_preemption(PreemptionPreset::global, n);
        if (name == "self") return preset_preemption(PreemptionPreset::self_preemption, n);
        if (name == "non_preemptive")
            return preset_preemption(PreemptionPreset::non_preemptive, n);
        if (name == "prioritized") return preset_preemption(PreemptionPreset::prioritized, n);
        throw ConfigError("preemption.preset",
                          "unknown preset '" + name +
                              "' (expected global, self, non_preemptive or prioritized)");
    }
    if (!j.is_array()) throw ConfigError("preemption", "expected a matrix or a preset object");
    Matrix p(j.size(), j.size() ? j.at(0).size() : 0);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& row = j.at(i);
        if (!row.is_array() || row.size() != p.cols())
            throw ConfigError("preemption", "expected a rectangular array of arrays");
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (!row.at(k).is_number())
                throw ConfigError("preemption[" + std::to_string(i + 1) + "][" +
                                      std::to_string(k + 1) + "]",
                                  "expected a number");
            p(i, k) = row.at(k).get<double>();
        }
    }
    return p;
}

}  // namespace

SystemSpec parse_system_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("", "top-level value must be an object");
    if (!root.contains("sources")) throw ConfigError("sources", "missing required array");
    const json& sources = root.at("sources");
    if (!sources.is_array() || sources.empty())
        throw ConfigError("sources", "expected a non-empty array");

    std::vector<SourceSpec> parsed;
    parsed.reserve(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const std::string path = "sources[" + std::to_string(i + 1) + "]";
        const json& s = sources.at(i);
        if (!s.is_object()) throw ConfigError(path, "expected a source object");
        if (!s.contains("service")) throw ConfigError(path + ".service", "missing service");
        parsed.push_back({get_number(s, path, "lambda"),
                          parse_service(s.at("service"), path + ".service"),
                          get_number(s, path, "error_prob", false, 0.0),
                          get_number(s, path, "retx_prob", false, 0.0)});
    }

    Matrix preemption = root.contains("preemption")
                            ? parse_preemption(root.at("preemption"), parsed.size())
                            : preset_preemption(PreemptionPreset::non_preemptive, parsed.size());
    std::size_t tagged = 1;
    if (root.contains("tagged")) {
        const json& t = root.at("tagged");
        if (!t.is_number_integer() || t.get<long>() < 1)
            throw ConfigError("tagged", "expected a positive source index");
        tagged = t.get<std::size_t>();
    }
    return SystemSpec(std::move(parsed), std::move(preemption), tagged);
}

SystemSpec load_system_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system_config(buf.str());
}

}  // namespace aoif
