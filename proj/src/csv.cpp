#include "nids/csv.hpp"

#include <istream>
#include <ostream>

#include "nids/errors.hpp"

namespace nids {

CsvReader::CsvReader(std::istream& in) : in_(in) {}

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    std::string cur;
    bool in_quotes = false;
    bool saw_any = false;

    int ci;
    while ((ci = in_.get()) != std::char_traits<char>::eof()) {
        char c = static_cast<char>(ci);
        saw_any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    cur.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                break;
            case ',':
                fields.push_back(std::move(cur));
                cur.clear();
                break;
            case '\r':
                if (in_.peek() == '\n') in_.get();
                [[fallthrough]];
            case '\n':
                fields.push_back(std::move(cur));
                ++rows_read_;
                return true;
            default:
                cur.push_back(c);
        }
    }
    if (in_quotes) fail("E_PARSE", "unterminated quoted field at end of input");
    if (!saw_any) return false;
    // last row without trailing newline
    fields.push_back(std::move(cur));
    ++rows_read_;
    return true;
}

std::string csv_escape(const std::string& field) {
    bool needs_quotes = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) return field;
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_.put(',');
        out_ << csv_escape(fields[i]);
    }
    out_.put('\n');
}

} // namespace nids
