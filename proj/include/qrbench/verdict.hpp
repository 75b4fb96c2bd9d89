#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qrbench {

using json = nlohmann::ordered_json;

/// Outcome of one identity check: both sides as printable values plus the
/// parameters that produced them.
struct Verdict {
    std::string check;
    std::string param_name = "p";
    std::int64_t param = 0;
    json params = json::object();
    bool pass = false;
    std::string lhs;
    std::string rhs;
    // Set when only magnitudes are compared and the sign is recorded as data.
    std::optional<int> observed_sign;
    double elapsed_ms = 0.0;
};

using VerdictList = std::vector<Verdict>;

inline bool all_pass(const VerdictList& list) {
    for (const auto& v : list)
        if (!v.pass) return false;
    return true;
}

/// JSONL record with stable field order:
/// {suite, p|m|n, params, pass, lhs, rhs, observed_sign?, elapsed_ms?}.
inline json to_json(const Verdict& v, const std::string& suite, bool with_timing = true) {
    json j;
    j["suite"] = suite;
    j[v.param_name] = v.param;
    json params = json::object();
    params["check"] = v.check;
    for (auto it = v.params.begin(); it != v.params.end(); ++it) params[it.key()] = it.value();
    j["params"] = params;
    j["pass"] = v.pass;
    j["lhs"] = v.lhs;
    j["rhs"] = v.rhs;
    if (v.observed_sign) j["observed_sign"] = *v.observed_sign;
    if (with_timing) j["elapsed_ms"] = v.elapsed_ms;
    return j;
}

inline Verdict verdict_from_json(const json& j) {
    Verdict v;
    for (const char* key : {"p", "m", "n"}) {
        if (j.contains(key)) {
            v.param_name = key;
            v.param = j.at(key).get<std::int64_t>();
        }
    }
    v.params = json::object();
    for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) {
        if (it.key() == "check")
            v.check = it.value().get<std::string>();
        else
            v.params[it.key()] = it.value();
    }
    v.pass = j.at("pass").get<bool>();
    v.lhs = j.at("lhs").get<std::string>();
    v.rhs = j.at("rhs").get<std::string>();
    if (j.contains("observed_sign")) v.observed_sign = j.at("observed_sign").get<int>();
    if (j.contains("elapsed_ms")) v.elapsed_ms = j.at("elapsed_ms").get<double>();
    return v;
}

}  // namespace qrbench
