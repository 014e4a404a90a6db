#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nids {

// RFC-4180 CSV: quoted fields may contain commas, doubled quotes and
// newlines. Reader is a small state machine over the raw stream; writer
// quotes only when needed.

class CsvReader {
public:
    explicit CsvReader(std::istream& in);

    // Reads the next row into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    std::size_t rows_read() const { return rows_read_; }

private:
    std::istream& in_;
    std::size_t rows_read_ = 0;
};

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void write_row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
};

std::string csv_escape(const std::string& field);

} // namespace nids
