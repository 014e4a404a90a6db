#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nids {

// Plain-text key-value document: one "key = value" pair per line, '#'
// starts a comment, order preserved. Used for provenance sidecars, scaler
// and selection files, and run configs.
class KvDoc {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string dump() const;
    static KvDoc parse(const std::string& text);

    void save(const std::string& path) const;
    static KvDoc load(const std::string& path);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_double(double value);  // shortest round-trip form
std::string format_float(float value);
double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);

} // namespace nids
