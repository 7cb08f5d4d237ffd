// Minimal nested key-value config format shared by the CLI subcommands:
// one "dotted.key = value" per line, '#' comments, blank lines ignored.
#ifndef TACHYON_KEYVALUE_HPP
#define TACHYON_KEYVALUE_HPP

#include <istream>
#include <map>
#include <stdexcept>
#include <string>

namespace tachyon {

using KeyValueMap = std::map<std::string, std::string>;

namespace keyvalue_detail {
inline std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}
}  // namespace keyvalue_detail

inline KeyValueMap parse_keyvalue(std::istream& is) {
    KeyValueMap out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string s = keyvalue_detail::strip(line);
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = keyvalue_detail::strip(s.substr(0, eq));
        std::string val = keyvalue_detail::strip(s.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        out[key] = val;
    }
    return out;
}

}  // namespace tachyon

#endif
