#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace ehd::test {

/// Structural comparison of two report documents. Numbers agree to a relative
/// tolerance; wall clock, output locations and the bit-level checksum are skipped.
/// Returns an empty string on success, otherwise the first difference.
inline std::string compare_reports(const nlohmann::json& a, const nlohmann::json& b, const std::string& path = "",
                                   double rtol = 1e-9) {
    static const char* const skipped[] = {"/wall_clock", "/config/outputs/output_dir", "/run/checksum"};
    for (const char* s : skipped)
        if (path == s) return {};
    if (a.is_number() && b.is_number()) {
        const double x = a.get<double>(), y = b.get<double>();
        if (std::abs(x - y) <= rtol * std::max({std::abs(x), std::abs(y), 1e-300}) + 1e-300) return {};
        std::ostringstream msg;
        msg << path << ": " << x << " vs " << y;
        return msg.str();
    }
    if (a.type() != b.type()) return path + ": type differs";
    if (a.is_object()) {
        if (a.size() != b.size()) return path + ": key sets differ";
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (!b.contains(it.key())) return path + "/" + it.key() + ": missing";
            auto d = compare_reports(it.value(), b.at(it.key()), path + "/" + it.key(), rtol);
            if (!d.empty()) return d;
        }
        return {};
    }
    if (a.is_array()) {
        if (a.size() != b.size()) return path + ": length " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            auto d = compare_reports(a[i], b[i], path + "/" + std::to_string(i), rtol);
            if (!d.empty()) return d;
        }
        return {};
    }
    return a == b ? std::string() : path + ": " + a.dump() + " vs " + b.dump();
}

inline nlohmann::json load_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

}  // namespace ehd::test
