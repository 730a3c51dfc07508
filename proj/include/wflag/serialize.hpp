#pragma once

#include <fstream>
#include <optional>

#include <json.hpp>

#include "wflag/fibers.hpp"

namespace wflag {

using ordered_json = nlohmann::ordered_json;

inline ordered_json poly_to_json(const PolyZ& p) {
    ordered_json j;
    j["var"] = "q";
    if (p.is_zero()) {
        j["coeffs"] = ordered_json::array({0});
    } else {
        j["coeffs"] = p.c;
    }
    return j;
}

inline PolyZ poly_from_json(const ordered_json& j) {
    if (!j.contains("coeffs") || !j["coeffs"].is_array())
        throw std::invalid_argument("polynomial JSON lacks a coeffs array");
    IntVec c;
    for (const auto& x : j["coeffs"]) c.push_back(x.get<Int>());
    return PolyZ{std::move(c)};
}

inline ordered_json orbit_class_to_json(const OrbitClass& w) {
    ordered_json j;
    j["parahoric"] = w.parahoric.indices;
    j["min_rep"] = element_word_string(w.min_rep);
    return j;
}

inline ordered_json report_to_json(const DecompositionReport& rep) {
    ordered_json j;
    j["word"] = rep.spec.word;
    j["target"] = element_word_string(rep.spec.target);
    ordered_json f = ordered_json::object();
    ordered_json m = ordered_json::object();
    for (const auto& row : rep.rows) {
        const std::string key = element_word_string(row.v);
        f[key] = poly_to_json(row.F);
        m[key] = poly_to_json(row.M);
    }
    j["F"] = std::move(f);
    j["M"] = std::move(m);
    ordered_json sup = ordered_json::array();
    for (const auto& v : rep.supports) sup.push_back(element_word_string(v));
    j["supports"] = std::move(sup);
    j["checks"] = {{"reconstruction", rep.checks.reconstruction},
                   {"nonnegativity", rep.checks.nonnegativity},
                   {"duality", rep.checks.duality},
                   {"lefschetz", rep.checks.lefschetz},
                   {"global_sum", rep.checks.global_sum}};
    return j;
}

/// CSV export, one row per v.
inline std::string report_to_csv(const DecompositionReport& rep) {
    std::string out = "v,length,F,M,support\n";
    for (const auto& row : rep.rows) {
        out += "\"" + element_word_string(row.v) + "\"," + std::to_string(length(row.v)) + "," +
               row.F.str() + "," + row.M.str() + "," + (row.M.is_zero() ? "0" : "1") + "\n";
    }
    return out;
}

inline std::string report_to_text(const DecompositionReport& rep) {
    std::string out = "word: " + word_string(rep.spec.word) +
                      "\ntarget: " + element_word_string(rep.spec.target) + "\n";
    for (const auto& row : rep.rows) {
        out += "v=" + element_word_string(row.v) + "  F=" + row.F.str() + "  M=" + row.M.str() +
               "\n";
    }
    out += "supports:";
    for (const auto& v : rep.supports) out += " " + ("[" + element_word_string(v) + "]");
    out += "\nchecks: reconstruction=" + std::to_string(rep.checks.reconstruction) +
           " nonnegativity=" + std::to_string(rep.checks.nonnegativity) +
           " duality=" + std::to_string(rep.checks.duality) +
           " lefschetz=" + std::to_string(rep.checks.lefschetz) +
           " global_sum=" + std::to_string(rep.checks.global_sum) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Persistent KL-table cache: a single versioned JSON document.  A version or
// group mismatch invalidates the file.
// ---------------------------------------------------------------------------

struct CacheFile {
    static constexpr int current_version = 1;
    int version = current_version;
    std::string group;
    // key: "<u-word>|<w-word>"
    std::map<std::string, PolyZ> entries;
};

inline std::optional<CacheFile> load_cache(const std::string& path, const std::string& group) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (!j.is_object() || !j.contains("version") || !j.contains("group") ||
        !j.contains("entries"))
        return std::nullopt;
    if (j["version"].get<int>() != CacheFile::current_version) return std::nullopt;
    if (j["group"].get<std::string>() != group) return std::nullopt;
    CacheFile c;
    c.group = group;
    try {
        for (const auto& [k, v] : j["entries"].items()) c.entries[k] = poly_from_json(v);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return c;
}

inline void save_cache(const std::string& path, const CacheFile& c) {
    ordered_json j;
    j["version"] = c.version;
    j["group"] = c.group;
    ordered_json e = ordered_json::object();
    for (const auto& [k, v] : c.entries) e[k] = poly_to_json(v);
    j["entries"] = std::move(e);
    std::ofstream out(path, std::ios::trunc);
    out << j.dump(2) << "\n";
}

}  // namespace wflag
