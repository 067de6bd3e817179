#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace autoreg::cli {

/// File-system or parse failure on an input/output path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad flags, malformed inputs, or an invalid config.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a sample file: `.csv` (one value per line, optional header line) or
/// `.f64` (raw little-endian IEEE-754 doubles).
std::vector<double> read_samples(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

/// Shortest round-trip representation; "inf", "-inf", "nan" for specials.
std::string format_number(double v);

/// Quotes a CSV field when it contains a separator, quote, or newline.
std::string csv_field(const std::string& s);

/// Header-indexed CSV table with string cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index, or -1 when absent.
    int column(const std::string& name) const;
    double number(std::size_t row, int col) const;
};

CsvTable parse_csv(const std::string& text);

}  // namespace autoreg::cli
