#include "nids/kv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nids/errors.hpp"

namespace nids {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

void KvDoc::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

void KvDoc::set(const std::string& key, double value) { set(key, format_double(value)); }

void KvDoc::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

bool KvDoc::has(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return true;
    return false;
}

const std::string& KvDoc::get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    fail("E_CONFIG", "missing key '" + key + "'");
}

std::string KvDoc::get_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
}

std::string KvDoc::dump() const {
    std::ostringstream out;
    for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
    return out.str();
}

KvDoc KvDoc::parse(const std::string& text) {
    KvDoc doc;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            fail("E_CONFIG", "line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            fail("E_CONFIG", "line " + std::to_string(lineno) + ": empty key");
        doc.entries_.emplace_back(key, value);
    }
    return doc;
}

void KvDoc::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("E_IO", "cannot write '" + path + "'");
    out << dump();
    if (!out) fail("E_IO", "write failed for '" + path + "'");
}

KvDoc KvDoc::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("E_IO", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_float(float value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        fail("E_PARSE", "not a number: '" + text + "' (" + what + ")");
    return value;
}

long long parse_int(const std::string& text, const std::string& what) {
    long long value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        fail("E_PARSE", "not an integer: '" + text + "' (" + what + ")");
    return value;
}

} // namespace nids
