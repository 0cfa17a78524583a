#include "psc/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "psc/errors.hpp"

namespace psc {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding spaces
        const auto a = field.find_first_not_of(" \t\r");
        const auto b = field.find_last_not_of(" \t\r");
        fields.push_back(a == std::string::npos ? std::string() : field.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

CsvData ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw ParseError(path + ": empty file");

    CsvData out;
    std::size_t first_row = 0;
    std::vector<std::string> head = split_line(lines[0]);
    bool has_header = false;
    for (const auto& f : head) {
        double ignored;
        if (!parse_double(f, ignored)) {
            has_header = true;
            break;
        }
    }
    if (has_header) {
        out.column_names = head;
        first_row = 1;
        if (lines.size() == 1) throw ParseError(path + ": header but no data rows");
    }

    const std::size_t cols = split_line(lines[first_row]).size();
    if (cols == 0) throw ParseError(path + ": row 1 has no fields");
    if (has_header && out.column_names.size() != cols)
        throw ParseError(path + ": header width does not match data rows");
    const bool label_col = has_header && out.column_names.back() == "label";
    const std::size_t value_cols = label_col ? cols - 1 : cols;
    if (value_cols == 0) throw ParseError(path + ": no numeric columns");

    const std::size_t rows = lines.size() - first_row;
    out.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(value_cols));
    if (label_col) out.labels.resize(rows);

    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<std::string> fields = split_line(lines[first_row + i]);
        if (fields.size() != cols)
            throw ParseError(path + ": row " + std::to_string(i + 1) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(cols));
        for (std::size_t j = 0; j < value_cols; ++j) {
            double value;
            if (!parse_double(fields[j], value) || !std::isfinite(value))
                throw ParseError(path + ": row " + std::to_string(i + 1) + ", column " +
                                 std::to_string(j + 1) + ": bad numeric value '" + fields[j] +
                                 "'");
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
        }
        if (label_col) {
            double value;
            if (!parse_double(fields[cols - 1], value) || !std::isfinite(value) ||
                value != std::floor(value))
                throw ParseError(path + ": row " + std::to_string(i + 1) +
                                 ": bad label '" + fields[cols - 1] + "'");
            out.labels[i] = static_cast<int>(value);
        }
    }
    return out;
}

void write_csv(const std::string& path, const Matrix& values,
               const std::vector<std::string>& column_names, const std::vector<int>* labels) {
    std::ofstream outfile(path);
    if (!outfile) throw ValidationError("cannot write '" + path + "'");
    if (!column_names.empty()) {
        for (std::size_t j = 0; j < column_names.size(); ++j) {
            if (j) outfile << ',';
            outfile << column_names[j];
        }
        if (labels) outfile << ",label";
        outfile << '\n';
    }
    char buffer[64];
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            if (j) outfile << ',';
            std::snprintf(buffer, sizeof(buffer), "%.17g", values(i, j));
            outfile << buffer;
        }
        if (labels) outfile << ',' << (*labels)[static_cast<std::size_t>(i)];
        outfile << '\n';
    }
}

}  // namespace psc
