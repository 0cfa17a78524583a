#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psc/pca.hpp"

namespace psc {

struct CsvData {
    Matrix values;
    std::vector<std::string> column_names;  // empty when the file had no header
    std::vector<int> labels;                // from a trailing "label" column, if present
};

/// Reads a numeric CSV: rows are observations, columns variables, optional
/// header, optional final integer column named "label". Ragged rows,
/// non-numeric cells and non-finite values are parse errors that cite the
/// row/column.
CsvData ingest_csv(const std::string& path);

/// Writes a matrix as CSV with the given header names (may be empty) and an
/// optional label column appended.
void write_csv(const std::string& path, const Matrix& values,
               const std::vector<std::string>& column_names,
               const std::vector<int>* labels = nullptr);

}  // namespace psc
