#include "gaplab/cli/csv.hpp"

#include <charconv>
#include <cmath>

#include "gaplab/error.hpp"

namespace gaplab::cli {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (const auto& h : header) cell(h);
    end_row();
}

CsvWriter& CsvWriter::cell(std::string_view s) {
    if (in_row_++ > 0) out_ += ',';
    out_ += s;
    return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(std::string_view(format_double(x))); }

CsvWriter& CsvWriter::cell(std::uint64_t x) { return cell(std::string_view(std::to_string(x))); }

CsvWriter& CsvWriter::cell(bool b) { return cell(std::string_view(b ? "true" : "false")); }

void CsvWriter::end_row() {
    if (in_row_ != columns_)
        throw Error(ErrorKind::DimensionMismatch, "csv row has " + std::to_string(in_row_) + " cells, expected " +
                                                      std::to_string(columns_));
    out_ += '\n';
    in_row_ = 0;
}

namespace {

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        cells.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
    CsvTable t;
    std::size_t start = 0;
    bool first = true;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        start = end + 1;
        if (line.empty()) continue;
        auto cells = split(line);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size())
                throw Error(ErrorKind::InsufficientData, "csv row " + std::to_string(t.rows.size() + 1) + " is ragged");
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw Error(ErrorKind::InsufficientData, "csv has no header");
    return t;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw Error(ErrorKind::InsufficientData, "csv has no column '" + std::string(name) + "'");
}

const std::string& CsvTable::text(std::size_t row, std::string_view name) const { return rows.at(row)[column(name)]; }

double CsvTable::number(std::size_t row, std::string_view name) const {
    const std::string& s = text(row, name);
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw Error(ErrorKind::InsufficientData, "csv cell '" + s + "' in column " + std::string(name) + " is not a number");
    return x;
}

std::uint64_t CsvTable::integer(std::size_t row, std::string_view name) const {
    const std::string& s = text(row, name);
    std::uint64_t x = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw Error(ErrorKind::InsufficientData, "csv cell '" + s + "' in column " + std::string(name) + " is not an integer");
    return x;
}

}  // namespace gaplab::cli
