#pragma once

// Minimal CSV writing and reading for the experiment outputs. Fields never
// contain commas or quotes, so no quoting is done.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gaplab::cli {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    CsvWriter& cell(std::string_view s);
    CsvWriter& cell(double x);
    CsvWriter& cell(std::uint64_t x);
    CsvWriter& cell(bool b);
    void end_row();

    const std::string& str() const { return out_; }

private:
    std::size_t columns_;
    std::size_t in_row_ = 0;
    std::string out_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column position; InsufficientData if absent.
    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
    std::uint64_t integer(std::size_t row, std::string_view name) const;
    const std::string& text(std::size_t row, std::string_view name) const;
};

/// Parses text written by CsvWriter. InsufficientData on ragged rows.
CsvTable parse_csv(std::string_view text);

}  // namespace gaplab::cli
