#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pilotlim/potential.hpp"

namespace pilotlim {

using Json = nlohmann::ordered_json;

/// JSON has no infinities; non-finite values are written as "+inf", "-inf", "nan".
Json json_number(double value);
double number_from_json(const Json& j);

Json to_json(const Potential& p);

/// Shortest round-trip decimal form; non-finite values as inf / -inf / nan.
std::string format_number(double value);

/// Minimal CSV writer: header once, then rows of numbers.
/// Rows are buffered and flushed by close() (or the destructor).
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    void row_text(const std::vector<std::string>& cells);
    void close();
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::string buffer_;
    std::size_t columns_;
    bool closed_ = false;
};

void write_json(const std::filesystem::path& path, const Json& j);
void write_csv_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);

}  // namespace pilotlim
