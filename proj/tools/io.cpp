#include "io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace autoreg::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<double> read_csv_samples(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    std::vector<double> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string cell = trim(line);
        if (cell.empty()) continue;
        double v = 0.0;
        if (!parse_double(cell, v)) {
            if (lineno == 1) continue;  // header
            throw UsageError(fmt::format("{}:{}: not a number: '{}'", path.string(), lineno, cell));
        }
        out.push_back(v);
    }
    return out;
}

std::vector<double> read_f64_samples(const std::filesystem::path& path) {
    const std::string bytes = read_text(path);
    if (bytes.size() % 8 != 0) {
        throw UsageError(fmt::format("{}: size {} is not a multiple of 8 bytes", path.string(),
                                     bytes.size()));
    }
    std::vector<double> out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t raw = 0;
        for (int b = 7; b >= 0; --b) {
            raw = (raw << 8) | static_cast<unsigned char>(bytes[i * 8 + static_cast<std::size_t>(b)]);
        }
        out[i] = std::bit_cast<double>(raw);
    }
    return out;
}

}  // namespace

std::vector<double> read_samples(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".csv") return read_csv_samples(path);
    if (ext == ".f64") return read_f64_samples(path);
    throw UsageError(fmt::format("{}: unsupported sample format (use .csv or .f64)", path.string()));
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

double CsvTable::number(std::size_t row, int col) const {
    const std::string& cell = rows.at(row).at(static_cast<std::size_t>(col));
    if (cell == "nan") return std::nan("");
    if (cell == "inf") return HUGE_VAL;
    if (cell == "-inf") return -HUGE_VAL;
    double v = 0.0;
    if (!parse_double(cell, v)) {
        throw UsageError(fmt::format("row {}: '{}' is not a number", row + 1, cell));
    }
    return v;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;

    const auto end_record = [&] {
        record.push_back(trim(field));
        field.clear();
        if (table.header.empty()) {
            table.header = std::move(record);
        } else if (!(record.size() == 1 && record[0].empty())) {
            table.rows.push_back(std::move(record));
        }
        record.clear();
        any = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            record.push_back(trim(field));
            field.clear();
        } else if (c == '\n') {
            end_record();
        } else {
            field += c;
        }
    }
    if (any || !field.empty()) end_record();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != table.header.size()) {
            throw UsageError(fmt::format("CSV row {} has {} fields, header has {}", r + 1,
                                         table.rows[r].size(), table.header.size()));
        }
    }
    return table;
}

}  // namespace autoreg::cli
