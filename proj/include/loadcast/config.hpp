#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "loadcast/errors.hpp"
#include "loadcast/textio.hpp"

// Plain key=value experiment configs: '#' comments, blank lines ignored,
// unknown keys rejected at the call site via validate_keys.

namespace loadcast {

using KvMap = std::map<std::string, std::string, std::less<>>;

inline KvMap parse_kv_text(std::string_view text) {
    KvMap out;
    std::int64_t line_no = 0;
    for (std::string_view line : split_on(text, '\n')) {
        ++line_no;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::malformed_row, "expected key=value, got '" + std::string(s) + "'", line_no);
        const std::string key(trim(s.substr(0, eq)));
        if (key.empty()) throw Error(Errc::malformed_row, "empty key", line_no);
        out[key] = std::string(trim(s.substr(eq + 1)));
    }
    return out;
}

inline KvMap read_kv_file(const std::string& path) { return parse_kv_text(read_text_file(path)); }

inline void validate_keys(const KvMap& kv, const std::set<std::string>& allowed,
                          const std::string& what) {
    for (const auto& [k, v] : kv) {
        (void)v;
        if (!allowed.count(k))
            throw Error(Errc::invalid_config, what + ": unknown key '" + k + "'");
    }
}

inline std::int64_t kv_int(const KvMap& kv, const std::string& key, std::int64_t fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::int64_t v;
    if (!try_parse_int(it->second, v))
        throw Error(Errc::invalid_config, "key '" + key + "': bad integer '" + it->second + "'");
    return v;
}

inline double kv_double(const KvMap& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    double v;
    if (!try_parse_double(it->second, v))
        throw Error(Errc::invalid_config, "key '" + key + "': bad number '" + it->second + "'");
    return v;
}

inline std::vector<std::int64_t> kv_int_list(const KvMap& kv, const std::string& key,
                                             std::vector<std::int64_t> fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::vector<std::int64_t> out;
    for (std::string_view part : split_on(it->second, ',')) {
        std::int64_t v;
        if (!try_parse_int(trim(part), v))
            throw Error(Errc::invalid_config, "key '" + key + "': bad list entry '" +
                                                  std::string(part) + "'");
        out.push_back(v);
    }
    if (out.empty()) throw Error(Errc::invalid_config, "key '" + key + "': empty list");
    return out;
}

} // namespace loadcast
