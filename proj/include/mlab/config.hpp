#ifndef MLAB_CONFIG_HPP
#define MLAB_CONFIG_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace mlab {

// flat key=value config; '#' starts a comment, blank lines are skipped,
// duplicate keys are errors. Readers mark keys as consumed so that unused
// (misspelled) keys can be rejected wholesale by check_all_consumed().
struct ConfigMap {
    std::string source_name;                              // for diagnostics
    std::vector<std::pair<std::string, std::string>> entries;  // file order
    std::map<std::string, std::string> values;
    std::map<std::string, long long> lines;
    mutable std::set<std::string> consumed;

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;       // empty if absent
    std::vector<long long> get_int_list(const std::string& key) const;      // empty if absent
    void check_all_consumed() const;  // unknown keys are hard errors
};

ConfigMap parse_config_text(const std::string& text, const std::string& source_name);
ConfigMap parse_config_file(const std::string& path);

}  // namespace mlab

#endif
