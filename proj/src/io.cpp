#include "pilotlim/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

#include "pilotlim/error.hpp"

namespace pilotlim {

Json json_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
    return value;
}

double number_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "+inf" || s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        if (s == "nan") return NAN;
    }
    fail(ErrorKind::invalid_argument, "expected a number, got " + j.dump());
}

Json to_json(const Potential& p) {
    Json params = Json::object();
    switch (p.kind()) {
        case PotentialKind::free: break;
        case PotentialKind::linear: params["slope"] = p.param(0); break;
        case PotentialKind::harmonic: params["coefficient"] = p.param(0); break;
        case PotentialKind::sinusoidal:
            params["amplitude"] = p.param(0);
            params["period"] = p.param(1);
            break;
        case PotentialKind::soft_coulomb:
            params["coupling"] = p.param(0);
            params["softening"] = p.param(1);
            break;
        case PotentialKind::yukawa:
            params["coupling"] = p.param(0);
            params["screening"] = p.param(1);
            break;
    }
    return Json{{"kind", std::string(to_string(p.kind()))}, {"params", params}, {"stretch", p.stretch()}};
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return fmt::format("{}", value);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += header[i];
    }
    buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    require(values.size() == columns_, "csv: row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += format_number(values[i]);
    }
    buffer_ += '\n';
}

void CsvWriter::row_text(const std::vector<std::string>& cells) {
    require(cells.size() == columns_, "csv: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

void CsvWriter::close() {
    if (closed_) return;
    closed_ = true;
    std::ofstream out(path_, std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open " + path_.string() + " for writing");
    out << buffer_;
    if (!out) fail(ErrorKind::io, "write failed for " + path_.string());
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
    }
}

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

void write_csv_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
    require(header.size() == columns.size(), "csv: header/column count mismatch");
    CsvWriter w(path, header);
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    std::vector<double> r(columns.size());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < columns.size(); ++c) r[c] = columns[c][i];
        w.row(r);
    }
    w.close();
}

}  // namespace pilotlim
